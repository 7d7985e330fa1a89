#include "mmsim/sweep_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "mmsim/config.hpp"

namespace mmsim {

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(const SweepResult& r, std::ostream& out) {
  const SweepSpec& spec = r.spec;
  out << spec.axes[0].name;
  if (spec.axes.size() == 2) out << ',' << spec.axes[1].name;
  out << ",stability_margin,flag";
  for (const auto& pair : spec.pairs) out << ',' << pair.id();
  out << '\n';

  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) {
      const PointResult& pt = r.at(i, j);
      out << format_number(pt.coord[0]);
      if (spec.axes.size() == 2) out << ',' << format_number(pt.coord[1]);
      out << ',' << format_number(pt.stability_margin) << ',' << to_string(pt.flag);
      for (const auto& pair : spec.pairs) {
        const auto& v = pt.log_neg[pair.index()];
        out << ',' << (v ? format_number(*v) : std::string("NA"));
      }
      out << '\n';
    }
  }
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_csv(result, out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

nlohmann::json to_json(const SweepSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["axes"] = nlohmann::json::array();
  for (const Axis& a : spec.axes)
    j["axes"].push_back({{"name", a.name},
                         {"start", a.start},
                         {"stop", a.stop},
                         {"count", a.count},
                         {"unit", std::string(to_string(a.unit))}});
  j["fixed"] = nlohmann::json::object();
  for (const auto& [name, value] : spec.fixed) j["fixed"][name] = value;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : spec.pairs) j["pairs"].push_back(p.id());
  if (spec.optimize_cavity_for) j["optimize_cavity_for"] = spec.optimize_cavity_for->id();
  j["margin_only"] = spec.margin_only;
  return j;
}

std::string params_hash(const SystemParams& params) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : to_toml(params)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

nlohmann::json sweep_metadata(const SweepResult& r, const std::vector<std::string>& overrides) {
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& pt : r.points) ++counts[static_cast<int>(pt.flag)];
  nlohmann::json j;
  j["code_version"] = MMSIM_VERSION;
  j["spec"] = to_json(r.spec);
  j["resolved_params"] = to_json(r.base);
  j["params_hash"] = params_hash(r.base);
  j["overrides"] = overrides;
  j["points"] = r.points.size();
  j["flags"] = {{"ok", counts[0]}, {"unstable", counts[1]}, {"unphysical", counts[2]}, {"error", counts[3]}};
  j["workers"] = r.workers;
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p += ".meta.json";
  return p;
}

}  // namespace mmsim
