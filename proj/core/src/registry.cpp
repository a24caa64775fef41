#include "recoil/registry.hpp"

#include <vector>

#include "recoil/errors.hpp"
#include "recoil/io.hpp"

namespace recoil {

namespace {

constexpr const char* kRequired[] = {
    "r_infinity", "c", "ar_electron", "ar_cs", "m_12c", "g_local",
    "ar_rb_bradley1999", "ar_rb_mount2010", "ar_rb_mean",
};

}  // namespace

ConstantsRegistry ConstantsRegistry::from_records(std::vector<ConstantRecord> records,
                                                  std::string label,
                                                  std::string_view rb_mass_key) {
  ConstantsRegistry reg;
  reg.label_ = std::move(label);
  for (auto& r : records) {
    if (r.source.empty())
      throw DataError("constant '" + r.name + "' is missing a source label");
    auto name = r.name;
    if (!reg.records_.emplace(name, std::move(r)).second)
      throw DataError("duplicate constant '" + name + "'");
  }
  for (const char* name : kRequired)
    if (!reg.records_.count(name)) throw DataError(std::string("missing constant '") + name + "'");
  if (reg.get("c").sigma != 0.0)
    throw DataError("the speed of light must be exact (sigma = 0)");
  reg.rb_key_ = "ar_rb_" + std::string(rb_mass_key);
  if (!reg.records_.count(reg.rb_key_))
    throw DataError("unknown rb mass key '" + std::string(rb_mass_key) +
                    "' (expected bradley1999, mount2010 or mean)");
  return reg;
}

ConstantsRegistry ConstantsRegistry::from_file(const std::filesystem::path& path,
                                               std::string_view rb_mass_key) {
  return io::load_registry(path, rb_mass_key);
}

const Quantity& ConstantsRegistry::get(std::string_view name) const {
  auto it = records_.find(name);
  if (it == records_.end())
    throw DataError("constant '" + std::string(name) + "' not in registry");
  return it->second.quantity;
}

const std::string& ConstantsRegistry::source(std::string_view name) const {
  auto it = records_.find(name);
  if (it == records_.end())
    throw DataError("constant '" + std::string(name) + "' not in registry");
  return it->second.source;
}

}  // namespace recoil
