// Artifact I/O: CSV grids and trajectories (17 significant digits), JSON
// spectra, and the run manifest with FNV-1a content checksums.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "magtorus/dynamics.hpp"
#include "magtorus/jet.hpp"

namespace magtorus {

std::string format_g17(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);

// Header "x,y,value"; row-major over the grid with x outermost.
std::string grid_csv(const GridSampling& g);

// Header "t,<state columns>,<monitor columns>"; folded torus coordinates.
std::string trajectory_csv(const Trajectory& traj);

nlohmann::json spectrum_to_json(const Field2& f);
Field2 spectrum_from_json(const nlohmann::json& j, int band_limit);

nlohmann::json jet_to_json(const StateJet& jet);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Writes text to out_dir/name and records it for the manifest.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path dir);
  const std::filesystem::path& dir() const { return dir_; }

  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& j);
  // manifest.json with timestamp, tool version, config echo, checksums.
  void finalize(const nlohmann::json& config);

 private:
  std::filesystem::path dir_;
  nlohmann::json artifacts_ = nlohmann::json::array();
};

}  // namespace magtorus
