#pragma once

#include <stdexcept>
#include <string>

namespace pdrsim {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// distance() called with points in different coordinate frames
struct FrameMismatchError : Error { using Error::Error; };

// lookup of a node/cell/file that does not exist
struct NotFoundError : Error { using Error::Error; };

// malformed or inconsistent configuration (bad model block, missing key, ...)
struct ConfigError : Error { using Error::Error; };

// input data fails a structural check (bad CSV row, count mismatch, ...)
struct ValidationError : Error { using Error::Error; };

// query outside a schedule's domain
struct DomainError : Error { using Error::Error; };

// curves of different lengths compared
struct AlignmentError : Error { using Error::Error; };

// analysis requested on a results tree with missing cells
struct IncompleteGridError : Error { using Error::Error; };

// statistic needs more samples than provided (e.g. std over one seed)
struct InsufficientDataError : Error { using Error::Error; };

// results directory was produced under a different configuration
struct StaleResultsError : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };

}  // namespace pdrsim
