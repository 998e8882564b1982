#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cmcf/axisym.hpp"
#include "cmcf/flat_flow.hpp"
#include "cmcf/grid.hpp"

namespace cmcf::io {

// CMCF1 set dump, little endian:
//   "CMCF1" u32 nx u32 ny u32 nz f64 h f64 origin_x f64 origin_y
//   then nx*ny*nz bits packed 8 per byte, x fastest, LSB first.
void write_dump(std::ostream& os, const BinarySet& e);
BinarySet read_dump(std::istream& is);
void write_dump(const std::filesystem::path& path, const BinarySet& e);
BinarySet read_dump(const std::filesystem::path& path);

// Legacy ASCII VTK, STRUCTURED_POINTS, unsigned char scalars "inside".
void write_vtk(std::ostream& os, const BinarySet& e);

// k,perimeter,adhesion,dissipation,total; row k holds the capillary terms of
// E(tau, k) and the dissipation of the step that produced it.
void write_energies_csv(std::ostream& os, const FlatFlowTrajectory& traj);

// t,idx,r,z
void write_front_csv(std::ostream& os, const std::vector<AxisymFront>& fronts);

// Minimal TOML: [table] headers, key = value with strings, booleans, numbers
// and flat arrays of numbers. Keys are flattened to "table.key".
using TomlValue = std::variant<bool, double, std::string, std::vector<double>>;

class TomlDoc {
 public:
  static TomlDoc parse(std::istream& is);
  static TomlDoc parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  void set(const std::string& key, TomlValue v) { values_[key] = std::move(v); }
  const std::map<std::string, TomlValue>& values() const { return values_; }

  // Writes the flattened keys back out, grouped by table.
  void write(std::ostream& os) const;

 private:
  std::map<std::string, TomlValue> values_;
};

// Writes to path.tmp then renames over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Output directory with quarantine: files are staged under
// out/_incomplete/<tag>/ and moved into out/ by commit(). If commit() is never
// called the staged files stay in the quarantine directory.
class StagedOutput {
 public:
  StagedOutput(std::filesystem::path out, const std::string& tag);
  const std::filesystem::path& dir() const { return stage_; }
  std::filesystem::path file(const std::string& name) const { return stage_ / name; }
  void write(const std::string& name, const std::string& content) const;
  void commit();

 private:
  std::filesystem::path out_;
  std::filesystem::path stage_;
};

}  // namespace cmcf::io
