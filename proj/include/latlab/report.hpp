#pragma once

// Byte-stable report formatting: fixed 12-significant-digit floats,
// sorted JSON keys (nlohmann objects are key-ordered), atomic-ish file
// writes.

#include <string>

namespace latlab {

std::string format_double(double x);

// Rounds to 12 significant digits so JSON output is byte-stable across
// thread counts and platforms with differing last-ulp behavior.
double round_for_report(double x);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace latlab
