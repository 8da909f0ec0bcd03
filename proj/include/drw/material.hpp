#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace drw {

// Isotropic, non-magnetic dielectric. Permittivity does not depend on
// frequency; see DispersionModel for the hook.
class Material {
 public:
  Material(std::string name, double eps_r, double tan_delta);

  const std::string& name() const { return name_; }
  double eps_r() const { return eps_r_; }
  double tan_delta() const { return tan_delta_; }

  // Same substance with a different loss tangent.
  Material with_tan_delta(double tan_delta) const;

  bool operator==(const Material&) const = default;

 private:
  std::string name_;
  double eps_r_;
  double tan_delta_;
};

// eps_r * (1 - j tan_delta)
std::complex<double> complex_permittivity(const Material& m, double f);

// Frequency-dependence hook. Only the constant model ships.
class DispersionModel {
 public:
  virtual ~DispersionModel() = default;
  virtual std::complex<double> permittivity(const Material& m, double f) const = 0;
};

class ConstantDispersion final : public DispersionModel {
 public:
  std::complex<double> permittivity(const Material& m, double f) const override {
    return complex_permittivity(m, f);
  }
};

class MaterialCatalog {
 public:
  // Presets used throughout the simulations of the 160x80 um channel.
  static MaterialCatalog builtin();

  void add(const Material& m);
  const Material& lookup(const std::string& name) const;  // throws NotFound
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Material> entries_;
};

MaterialCatalog material_catalog();

}  // namespace drw
