#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "drw/fdfd.hpp"
#include "drw/sparams.hpp"

namespace drw {

// Touchstone v1.1, "# GHz S RI R 50". 2-port columns S11 S21 S12 S22.
// `comments` become leading "!" lines (the run hash goes there).
void export_touchstone(const SParameterSet& sp, const std::filesystem::path& path,
                       const std::vector<std::string>& comments = {});
std::string touchstone_text(const SParameterSet& sp, const std::vector<std::string>& comments = {});

// Reads 1- and 2-port files written in RI format with GHz, MHz, kHz or Hz.
SParameterSet read_touchstone(const std::filesystem::path& path);
SParameterSet parse_touchstone(const std::string& text, int n_ports);

// One row per cell centre (j outer, i inner); every component is bilinearly
// interpolated from its staggered samples.
void export_field_csv(const ModeSolution& ms, const std::filesystem::path& path);
std::string field_csv_text(const ModeSolution& ms);

inline constexpr const char* kFieldCsvHeader =
    "x_um,y_um,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez,re_Hx,im_Hx,re_Hy,im_Hy,re_Hz,im_Hz,abs_E";

// Writes the whole file or throws Io.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace drw
