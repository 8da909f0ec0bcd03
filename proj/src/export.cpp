#include "drw/export.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drw/error.hpp"
#include "drw/format.hpp"

namespace drw {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string touchstone_text(const SParameterSet& sp, const std::vector<std::string>& comments) {
  const int n = sp.n_ports();
  if (n != 1 && n != 2) throw Error(ErrorCode::InvalidArgument, "touchstone export needs 1 or 2 ports");
  std::string out;
  for (const auto& c : comments) out += "! " + c + "\n";
  out += "! waves are power-normalised modal waves; R 50 is a nominal tag\n";
  out += "# GHz S RI R 50\n";
  for (std::size_t k = 0; k < sp.size(); ++k) {
    out += format_double(sp.frequencies()[k] / 1e9);
    auto put = [&](int o, int i) {
      const auto v = sp.s(o, i, k);
      out += " " + format_double(v.real()) + " " + format_double(v.imag());
    };
    if (n == 1) {
      put(1, 1);
    } else {
      put(1, 1);
      put(2, 1);
      put(1, 2);
      put(2, 2);
    }
    out += "\n";
  }
  return out;
}

void export_touchstone(const SParameterSet& sp, const std::filesystem::path& path,
                       const std::vector<std::string>& comments) {
  write_text_file(path, touchstone_text(sp, comments));
}

SParameterSet parse_touchstone(const std::string& text, int n_ports) {
  if (n_ports != 1 && n_ports != 2) throw Error(ErrorCode::InvalidArgument, "1 or 2 ports only");
  std::istringstream in(text);
  std::string line;
  double fscale = 1e9;
  bool seen_option = false;
  std::vector<double> freqs;
  std::vector<Eigen::MatrixXcd> mats;
  const int nv = 1 + 2 * n_ports * n_ports;
  while (std::getline(in, line)) {
    if (const auto p = line.find('!'); p != std::string::npos) line.erase(p);
    std::istringstream ls(line);
    if (!line.empty() && line.find('#') != std::string::npos) {
      std::string tok;
      ls.ignore(line.find('#') + 1);
      while (ls >> tok) {
        for (auto& ch : tok) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (tok == "GHZ") fscale = 1e9;
        else if (tok == "MHZ") fscale = 1e6;
        else if (tok == "KHZ") fscale = 1e3;
        else if (tok == "HZ") fscale = 1.0;
        else if (tok == "MA" || tok == "DB") throw Error(ErrorCode::InvalidArgument, "only RI data is supported");
      }
      seen_option = true;
      continue;
    }
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (v.empty()) continue;
    if (!seen_option) throw Error(ErrorCode::InvalidArgument, "data before the option line");
    if (static_cast<int>(v.size()) != nv)
      throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(nv) + " values per line");
    freqs.push_back(v[0] * fscale);
    Eigen::MatrixXcd m(n_ports, n_ports);
    if (n_ports == 1) {
      m(0, 0) = {v[1], v[2]};
    } else {
      m(0, 0) = {v[1], v[2]};
      m(1, 0) = {v[3], v[4]};
      m(0, 1) = {v[5], v[6]};
      m(1, 1) = {v[7], v[8]};
    }
    mats.push_back(m);
  }
  return {FrequencyGrid(std::move(freqs)), std::move(mats)};
}

SParameterSet read_touchstone(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  int n = 2;
  if (ext == ".s1p" || ext == ".S1P") n = 1;
  return parse_touchstone(read_text_file(path), n);
}

std::string field_csv_text(const ModeSolution& ms) {
  const Grid2D& g = *ms.grid;
  std::string out = std::string(kFieldCsvHeader) + "\n";
  const Component comps[] = {Component::Ex, Component::Ey, Component::Ez,
                             Component::Hx, Component::Hy, Component::Hz};
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y0() + (j + 0.5) * g.dy();
    for (int i = 0; i < g.nx(); ++i) {
      const double x = g.x0() + (i + 0.5) * g.dx();
      out += format_double(x * 1e6) + "," + format_double(y * 1e6);
      double e2 = 0.0;
      for (int c = 0; c < 6; ++c) {
        const auto v = interpolate_component(g, ms.fields.get(comps[c]), comps[c], x, y);
        if (c < 3) e2 += std::norm(v);
        out += "," + format_double(v.real()) + "," + format_double(v.imag());
      }
      out += "," + format_double(std::sqrt(e2)) + "\n";
    }
  }
  return out;
}

void export_field_csv(const ModeSolution& ms, const std::filesystem::path& path) {
  write_text_file(path, field_csv_text(ms));
}

}  // namespace drw
