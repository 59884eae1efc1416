#include "magtorus/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace magtorus {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

std::string grid_csv(const GridSampling& g) {
  std::string out = "x,y,value\n";
  const int m = g.resolution;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out += format_g17(static_cast<double>(i) / m);
      out += ',';
      out += format_g17(static_cast<double>(j) / m);
      out += ',';
      out += format_g17(g.values[static_cast<std::size_t>(i) * m + j]);
      out += '\n';
    }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const char* angle_cols[] = {"x", "y", "phi"};
  const char* cot_cols[] = {"x", "y", "p1", "p2"};
  for (int i = 0; i < traj.dim; ++i) {
    out += ',';
    out += (traj.dim == 3 ? angle_cols[i] : cot_cols[i]);
  }
  for (const auto& name : traj.monitor_names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    out += format_g17(traj.times[s]);
    for (int i = 0; i < traj.dim; ++i) {
      out += ',';
      out += format_g17(traj.states[s][static_cast<std::size_t>(i)]);
    }
    for (const auto& vals : traj.monitor_values) {
      out += ',';
      out += format_g17(vals[s]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json spectrum_to_json(const Field2& f) {
  nlohmann::json arr = nlohmann::json::array();
  const int n = f.band_limit();
  for (int m = -n; m <= n; ++m)
    for (int k = -n; k <= n; ++k) {
      const auto c = f.coeff(m, k);
      if (c.real() == 0.0 && c.imag() == 0.0) continue;
      arr.push_back({{"m", m}, {"n", k}, {"re", c.real()}, {"im", c.imag()}});
    }
  return arr;
}

Field2 spectrum_from_json(const nlohmann::json& j, int band_limit) {
  std::vector<ModeEntry> modes;
  for (const auto& e : j)
    modes.push_back({e.at("m").get<int>(), e.at("n").get<int>(),
                     {e.at("re").get<double>(), e.at("im").get<double>()}});
  return Field2::from_modes(modes, band_limit);
}

nlohmann::json jet_to_json(const StateJet& jet) {
  nlohmann::json orders = nlohmann::json::array();
  for (int k = 0; k <= jet.order(); ++k) {
    const StateU& u = jet.coeffs[static_cast<std::size_t>(k)];
    orders.push_back({{"k", k},
                      {"lam", spectrum_to_json(u.lam)},
                      {"u0", spectrum_to_json(u.u0)},
                      {"f", spectrum_to_json(u.f)},
                      {"g", spectrum_to_json(u.g)}});
  }
  return {{"order", jet.order()},
          {"band_limit", jet.band_limit},
          {"discarded_mass", jet.discarded_mass},
          {"orders", orders}};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

RunDirectory::RunDirectory(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void RunDirectory::write(const std::string& name, const std::string& content) {
  write_text_file(dir_ / name, content);
  artifacts_.push_back({{"path", name},
                        {"bytes", content.size()},
                        {"fnv1a64", fnv1a64_hex(content)}});
}

void RunDirectory::write_json(const std::string& name, const nlohmann::json& j) {
  write(name, j.dump(2) + "\n");
}

void RunDirectory::finalize(const nlohmann::json& config) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                        now.time_since_epoch())
                        .count();
  nlohmann::json manifest = {{"tool", "magtorus"},
                             {"version", "1.0.0"},
                             {"created_unix", secs},
                             {"config", config},
                             {"artifacts", artifacts_}};
  write_text_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace magtorus
