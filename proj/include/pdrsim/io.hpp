#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pdrsim/errors.hpp"

namespace pdrsim::io {

// shortest decimal string that round-trips the exact double; keeps emitted
// CSVs byte-stable across runs and platforms with the same FP behavior
std::string fmt_double(double v);

double parse_double(std::string_view s);  // full-string parse, ValidationError otherwise
long long parse_int(std::string_view s);

std::string read_file(const std::filesystem::path& path);

// write to <path>.tmp then rename: readers never observe partial files
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// minimal CSV: no quoting (none of the schemas here need it); empty lines skipped
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace pdrsim::io
