#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "craftgen/raster.hpp"

namespace craftgen::io {

/// 8-bit RGB(A) PNG to a raster; alpha is dropped. Throws Error naming the
/// path when the file is missing or undecodable.
Raster read_png(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_png(const std::filesystem::path& path, const Raster& img);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view content);

/// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(std::string_view line);

/// Non-empty lines with trailing CR removed.
std::vector<std::string> csv_lines(std::string_view text);

}  // namespace craftgen::io
