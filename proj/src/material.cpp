#include "drw/material.hpp"

#include <cmath>

#include "drw/error.hpp"

namespace drw {

Material::Material(std::string name, double eps_r, double tan_delta)
    : name_(std::move(name)), eps_r_(eps_r), tan_delta_(tan_delta) {
  if (!std::isfinite(eps_r) || eps_r < 1.0)
    throw Error(ErrorCode::InvalidArgument, "material '" + name_ + "': eps_r must be >= 1");
  if (!std::isfinite(tan_delta) || tan_delta < 0.0)
    throw Error(ErrorCode::InvalidArgument, "material '" + name_ + "': tan_delta must be >= 0");
  if (tan_delta > 0.1)
    throw Error(ErrorCode::InvalidArgument,
                "material '" + name_ + "': tan_delta > 0.1 is outside the perturbative loss model");
}

Material Material::with_tan_delta(double tan_delta) const {
  return Material(name_, eps_r_, tan_delta);
}

std::complex<double> complex_permittivity(const Material& m, double /*f*/) {
  return {m.eps_r(), -m.eps_r() * m.tan_delta()};
}

MaterialCatalog MaterialCatalog::builtin() {
  MaterialCatalog c;
  c.add(Material("rod-core-lossless", 1000.0, 0.0));
  c.add(Material("rod-core-realistic", 1000.0, 0.0005));
  c.add(Material("rod-core-worst", 1000.0, 0.002));
  c.add(Material("rod-clad", 12.0, 0.0));
  return c;
}

void MaterialCatalog::add(const Material& m) { entries_.insert_or_assign(m.name(), m); }

const Material& MaterialCatalog::lookup(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::NotFound, "material '" + name + "'");
  return it->second;
}

bool MaterialCatalog::contains(const std::string& name) const {
  return entries_.count(name) != 0;
}

std::vector<std::string> MaterialCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

MaterialCatalog material_catalog() { return MaterialCatalog::builtin(); }

}  // namespace drw
