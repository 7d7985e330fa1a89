#include "mmsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "toml.hpp"

namespace mmsim {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  // TOML floats need a fraction or exponent.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

double number(const toml::node& node, const std::string& where) {
  if (auto v = node.value<double>()) return *v;
  throw ConfigError(where + ": expected a number");
}

std::string text(const toml::node& node, const std::string& where) {
  if (auto v = node.value<std::string>()) return *v;
  throw ConfigError(where + ": expected a string");
}

void read_subsystem(const toml::table& tbl, const std::string& section, Subsystem& s) {
  for (const auto& [key, node] : tbl) {
    const std::string k(key.str());
    const std::string where = section + "." + k;
    const double v = number(node, where);
    if (k == "omega_c") s.omega_c = hz_to_rad(v);
    else if (k == "omega_m") s.omega_m = hz_to_rad(v);
    else if (k == "omega_b") s.omega_b = hz_to_rad(v);
    else if (k == "Delta_c") s.Delta_c = hz_to_rad(v);
    else if (k == "Delta_m") s.Delta_m = hz_to_rad(v);
    else if (k == "kappa_c") s.kappa_c = hz_to_rad(v);
    else if (k == "kappa_m") s.kappa_m = hz_to_rad(v);
    else if (k == "gamma_b") s.gamma_b = hz_to_rad(v);
    else if (k == "g_cm") s.g_cm = hz_to_rad(v);
    else if (k == "g_mb") s.g_mb = hz_to_rad(v);
    else if (k == "omega_rabi") s.omega_rabi = hz_to_rad(v);
    else throw ConfigError("unknown key '" + where + "'");
  }
}

const toml::table& as_section(const toml::node& node, const std::string& name) {
  if (const auto* t = node.as_table()) return *t;
  throw ConfigError("'" + name + "' must be a table");
}

SystemParams from_table(const toml::table& root) {
  SystemParams p = SystemParams::table1();
  std::optional<double> shared_rabi;

  for (const auto& [key, node] : root) {
    const std::string k(key.str());
    if (k == "hop_Gamma") {
      p.hop_Gamma = hz_to_rad(number(node, k));
    } else if (k == "hopping_convention") {
      const auto v = text(node, k);
      if (v == "hamiltonian") p.hopping = HoppingConvention::hamiltonian;
      else if (v == "as_printed") p.hopping = HoppingConvention::as_printed;
      else throw ConfigError("hopping_convention must be \"hamiltonian\" or \"as_printed\"");
    } else if (k == "cavity1" || k == "cavity2") {
      // applied below so that [drive].omega_rabi does not clobber per-cavity values
    } else if (k == "drive") {
      for (const auto& [dkey, dnode] : as_section(node, k)) {
        const std::string dk(dkey.str());
        const std::string where = "drive." + dk;
        if (dk == "B0") p.drive.B0 = number(dnode, where);
        else if (dk == "sphere_diameter") p.drive.sphere_diameter = number(dnode, where);
        else if (dk == "rho_spin") p.drive.rho_spin = number(dnode, where);
        else if (dk == "target_G") p.drive.target_G = hz_to_rad(number(dnode, where));
        else if (dk == "omega_rabi") shared_rabi = hz_to_rad(number(dnode, where));
        else if (dk == "magnon_detuning_reference") {
          const auto v = text(dnode, where);
          if (v == "effective") p.drive.detuning_ref = MagnonDetuning::effective;
          else if (v == "bare") p.drive.detuning_ref = MagnonDetuning::bare;
          else throw ConfigError(where + " must be \"effective\" or \"bare\"");
        } else {
          throw ConfigError("unknown key '" + where + "'");
        }
      }
    } else if (k == "bath") {
      for (const auto& [bkey, bnode] : as_section(node, k)) {
        const std::string bk(bkey.str());
        if (bk == "temperature") p.temperature = number(bnode, "bath.temperature");
        else throw ConfigError("unknown key 'bath." + bk + "'");
      }
    } else {
      throw ConfigError("unknown key '" + k + "'");
    }
  }

  if (shared_rabi)
    for (auto& s : p.sub) s.omega_rabi = shared_rabi;
  for (int k = 0; k < 2; ++k) {
    const std::string name = "cavity" + std::to_string(k + 1);
    if (const auto* node = root.get(name)) read_subsystem(as_section(*node, name), name, p.sub[k]);
  }
  return p;
}

std::string describe(const toml::parse_error& err, std::string_view source) {
  std::ostringstream os;
  os << source << ":" << err.source().begin.line << ":" << err.source().begin.column << ": "
     << err.description();
  return os.str();
}

void apply_override(toml::table& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  while (!path.empty() && path.back() == ' ') path.pop_back();

  std::string section, key = path;
  if (const auto dot = path.find('.'); dot != std::string::npos) {
    section = path.substr(0, dot);
    key = path.substr(dot + 1);
  }
  if (key.empty() || key.find('.') != std::string::npos)
    throw ConfigError("override key '" + path + "' must be key or section.key");

  toml::table parsed;
  try {
    parsed = toml::parse("v = " + value);
  } catch (const toml::parse_error& err) {
    throw ConfigError("override '" + assignment + "': " + std::string(err.description()));
  }
  toml::node& v = *parsed.get("v");

  toml::table* target = &root;
  if (!section.empty()) {
    if (!root.contains(section)) root.insert(section, toml::table{});
    target = root.get_as<toml::table>(section);
    if (!target) throw ConfigError("override section '" + section + "' is not a table");
  }
  // bare integers are accepted for float-valued keys
  if (auto i = v.value_exact<int64_t>())
    target->insert_or_assign(key, static_cast<double>(*i));
  else if (auto d = v.value_exact<double>())
    target->insert_or_assign(key, *d);
  else if (auto s = v.value_exact<std::string>())
    target->insert_or_assign(key, *s);
  else
    throw ConfigError("override '" + assignment + "': unsupported value type");
}

}  // namespace

SystemParams parse_config(std::string_view text_in, std::string_view source_name,
                          std::span<const std::string> overrides) {
  toml::table root;
  try {
    root = toml::parse(text_in, source_name);
  } catch (const toml::parse_error& err) {
    throw ConfigError(describe(err, source_name));
  }
  for (const auto& o : overrides) apply_override(root, o);
  SystemParams p = from_table(root);
  require_valid(p);
  return p;
}

SystemParams load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string(), overrides);
}

std::string to_toml(const SystemParams& p) {
  std::ostringstream os;
  os << "hop_Gamma = " << fmt(rad_to_hz(p.hop_Gamma)) << "\n";
  os << "hopping_convention = \""
     << (p.hopping == HoppingConvention::hamiltonian ? "hamiltonian" : "as_printed") << "\"\n";
  for (int k = 0; k < 2; ++k) {
    const Subsystem& s = p.sub[k];
    os << "\n[cavity" << k + 1 << "]\n";
    os << "omega_c = " << fmt(rad_to_hz(s.omega_c)) << "\n";
    os << "omega_m = " << fmt(rad_to_hz(s.omega_m)) << "\n";
    os << "omega_b = " << fmt(rad_to_hz(s.omega_b)) << "\n";
    os << "Delta_c = " << fmt(rad_to_hz(s.Delta_c)) << "\n";
    os << "Delta_m = " << fmt(rad_to_hz(s.Delta_m)) << "\n";
    os << "kappa_c = " << fmt(rad_to_hz(s.kappa_c)) << "\n";
    os << "kappa_m = " << fmt(rad_to_hz(s.kappa_m)) << "\n";
    os << "gamma_b = " << fmt(rad_to_hz(s.gamma_b)) << "\n";
    os << "g_cm = " << fmt(rad_to_hz(s.g_cm)) << "\n";
    os << "g_mb = " << fmt(rad_to_hz(s.g_mb)) << "\n";
    if (s.omega_rabi) os << "omega_rabi = " << fmt(rad_to_hz(*s.omega_rabi)) << "\n";
  }
  os << "\n[drive]\n";
  os << "B0 = " << fmt(p.drive.B0) << "\n";
  os << "sphere_diameter = " << fmt(p.drive.sphere_diameter) << "\n";
  os << "rho_spin = " << fmt(p.drive.rho_spin) << "\n";
  os << "magnon_detuning_reference = \""
     << (p.drive.detuning_ref == MagnonDetuning::effective ? "effective" : "bare") << "\"\n";
  if (p.drive.target_G) os << "target_G = " << fmt(rad_to_hz(*p.drive.target_G)) << "\n";
  os << "\n[bath]\ntemperature = " << fmt(p.temperature) << "\n";
  return os.str();
}

nlohmann::json to_json(const SystemParams& p) {
  nlohmann::json j;
  j["hop_Gamma"] = rad_to_hz(p.hop_Gamma);
  j["hopping_convention"] =
      p.hopping == HoppingConvention::hamiltonian ? "hamiltonian" : "as_printed";
  for (int k = 0; k < 2; ++k) {
    const Subsystem& s = p.sub[k];
    nlohmann::json c = {
        {"omega_c", rad_to_hz(s.omega_c)}, {"omega_m", rad_to_hz(s.omega_m)},
        {"omega_b", rad_to_hz(s.omega_b)}, {"Delta_c", rad_to_hz(s.Delta_c)},
        {"Delta_m", rad_to_hz(s.Delta_m)}, {"kappa_c", rad_to_hz(s.kappa_c)},
        {"kappa_m", rad_to_hz(s.kappa_m)}, {"gamma_b", rad_to_hz(s.gamma_b)},
        {"g_cm", rad_to_hz(s.g_cm)},       {"g_mb", rad_to_hz(s.g_mb)}};
    if (s.omega_rabi) c["omega_rabi"] = rad_to_hz(*s.omega_rabi);
    j["cavity" + std::to_string(k + 1)] = c;
  }
  j["drive"] = {{"B0", p.drive.B0},
                {"sphere_diameter", p.drive.sphere_diameter},
                {"rho_spin", p.drive.rho_spin},
                {"magnon_detuning_reference",
                 p.drive.detuning_ref == MagnonDetuning::effective ? "effective" : "bare"}};
  if (p.drive.target_G) j["drive"]["target_G"] = rad_to_hz(*p.drive.target_G);
  j["bath"] = {{"temperature", p.temperature}};
  return j;
}

std::filesystem::path bundled_table1_path() {
  return std::filesystem::path(MMSIM_DATA_DIR) / "table1.toml";
}

}  // namespace mmsim
