#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "recoil/quantity.hpp"

namespace recoil {

struct ConstantRecord {
  std::string name;
  Quantity quantity;
  std::string source;
};

/// Externally sourced physical constants, loaded from a JSON data file
/// (never hard-coded in operations). The file carries three rubidium
/// relative-mass entries (two published values and their mean); which one
/// backs ar_rb() is chosen at load time.
class ConstantsRegistry {
 public:
  static ConstantsRegistry from_file(const std::filesystem::path& path,
                                     std::string_view rb_mass_key = "mean");

  const Quantity& r_infinity() const { return get("r_infinity"); }      // m^-1
  const Quantity& c() const { return get("c"); }                        // m s^-1, exact
  const Quantity& ar_electron() const { return get("ar_electron"); }    // 1
  const Quantity& ar_rb() const { return get(rb_key_); }                // 1
  const Quantity& ar_cs() const { return get("ar_cs"); }                // 1
  const Quantity& m_12c() const { return get("m_12c"); }                // kg/mol
  const Quantity& g_local() const { return get("g_local"); }            // m s^-2

  const Quantity& get(std::string_view name) const;
  const std::string& source(std::string_view name) const;
  const std::string& source_label() const { return label_; }
  const std::string& rb_mass_key() const { return rb_key_; }

  /// Used by loaders; validates invariants (c exact, required names present).
  static ConstantsRegistry from_records(std::vector<ConstantRecord> records, std::string label,
                                        std::string_view rb_mass_key);

 private:
  ConstantsRegistry() = default;

  std::map<std::string, ConstantRecord, std::less<>> records_;
  std::string label_;
  std::string rb_key_;
};

}  // namespace recoil
