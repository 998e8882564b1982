#include "cmcf/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmcf/error.hpp"

namespace cmcf::io {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[5] = {'C', 'M', 'C', 'F', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  is.read(reinterpret_cast<char*>(b), sizeof(T));
  require(is.good(), "CMCF1: truncated header");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double parse_number(const std::string& s, int line) {
  std::string t;
  for (char c : s)
    if (c != '_') t += c;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == t.size() && !t.empty(), "TOML line " + std::to_string(line) + ": bad value '" + s + "'");
  return v;
}

TomlValue parse_value(const std::string& raw, int line) {
  const std::string s = trim(raw);
  require(!s.empty(), "TOML line " + std::to_string(line) + ": missing value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"' || s.front() == '\'') {
    require(s.size() >= 2 && s.back() == s.front(), "TOML line " + std::to_string(line) + ": unterminated string");
    return s.substr(1, s.size() - 2);
  }
  if (s.front() == '[') {
    require(s.back() == ']', "TOML line " + std::to_string(line) + ": unterminated array");
    std::vector<double> out;
    std::stringstream items(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(items, item, ','))
      if (!trim(item).empty()) out.push_back(parse_number(trim(item), line));
    return out;
  }
  return parse_number(s, line);
}

}  // namespace

void write_dump(std::ostream& os, const BinarySet& e) {
  const auto& g = e.grid();
  os.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nz()));
  put_le<double>(os, g.h());
  put_le<double>(os, g.origin_x());
  put_le<double>(os, g.origin_y());
  const auto bits = e.bits();
  std::vector<char> packed((bits.size() + 7) / 8, 0);
  for (std::size_t c = 0; c < bits.size(); ++c)
    if (bits[c]) packed[c / 8] = static_cast<char>(packed[c / 8] | (1 << (c % 8)));
  os.write(packed.data(), static_cast<std::streamsize>(packed.size()));
}

BinarySet read_dump(std::istream& is) {
  char magic[5];
  is.read(magic, sizeof magic);
  require(is.good() && std::memcmp(magic, kMagic, sizeof kMagic) == 0, "CMCF1: bad magic");
  const auto nx = get_le<std::uint32_t>(is), ny = get_le<std::uint32_t>(is), nz = get_le<std::uint32_t>(is);
  const double h = get_le<double>(is), ox = get_le<double>(is), oy = get_le<double>(is);
  const HalfSpaceGrid g(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz), h, ox, oy);
  std::vector<char> packed((g.size() + 7) / 8);
  is.read(packed.data(), static_cast<std::streamsize>(packed.size()));
  require(static_cast<std::size_t>(is.gcount()) == packed.size(), "CMCF1: truncated bit field");
  std::vector<std::uint8_t> bits(g.size());
  for (std::size_t c = 0; c < bits.size(); ++c) bits[c] = (packed[c / 8] >> (c % 8)) & 1;
  return BinarySet(g, std::move(bits));
}

void write_dump(const fs::path& path, const BinarySet& e) {
  std::ostringstream os(std::ios::binary);
  write_dump(os, e);
  write_file_atomic(path, os.str());
}

BinarySet read_dump(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.is_open(), "CMCF1: cannot open " + path.string());
  return read_dump(is);
}

void write_vtk(std::ostream& os, const BinarySet& e) {
  const auto& g = e.grid();
  os << "# vtk DataFile Version 3.0\n"
     << "cmcf set\n"
     << "ASCII\n"
     << "DATASET STRUCTURED_POINTS\n"
     << "DIMENSIONS " << g.nx() << ' ' << g.ny() << ' ' << g.nz() << '\n'
     << "ORIGIN " << g17(g.origin_x() + 0.5 * g.h()) << ' ' << g17(g.origin_y() + 0.5 * g.h()) << ' '
     << g17(0.5 * g.h()) << '\n'
     << "SPACING " << g17(g.h()) << ' ' << g17(g.h()) << ' ' << g17(g.h()) << '\n'
     << "POINT_DATA " << g.size() << '\n'
     << "SCALARS inside unsigned_char 1\n"
     << "LOOKUP_TABLE default\n";
  const auto bits = e.bits();
  for (std::size_t c = 0; c < bits.size(); ++c) {
    os << (bits[c] ? '1' : '0');
    os << ((c + 1) % static_cast<std::size_t>(g.nx()) == 0 ? '\n' : ' ');
  }
}

void write_energies_csv(std::ostream& os, const FlatFlowTrajectory& traj) {
  os << "k,perimeter,adhesion,dissipation,total\n";
  for (std::size_t k = 0; k < traj.energies.size(); ++k) {
    const auto& e = traj.energies[k];
    const double total = k == 0 ? e.total : traj.step_energies[k];
    const double dissipation = k == 0 ? 0.0 : total - e.total;
    os << k << ',' << g17(e.perimeter_term) << ',' << g17(e.adhesion_term) << ',' << g17(dissipation) << ','
       << g17(total) << '\n';
  }
}

void write_front_csv(std::ostream& os, const std::vector<AxisymFront>& fronts) {
  os << "t,idx,r,z\n";
  for (const auto& f : fronts)
    for (std::size_t i = 0; i < f.markers.size(); ++i)
      os << g17(f.time) << ',' << i << ',' << g17(f.markers[i].r) << ',' << g17(f.markers[i].z) << '\n';
}

TomlDoc TomlDoc::parse(std::istream& is) {
  TomlDoc doc;
  std::string table, line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      require(s.back() == ']' && s.size() > 2 && s[1] != '[',
              "TOML line " + std::to_string(n) + ": unsupported table header");
      table = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    require(eq != std::string::npos, "TOML line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    require(!key.empty(), "TOML line " + std::to_string(n) + ": empty key");
    const std::string full = table.empty() ? key : table + "." + key;
    require(!doc.has(full), "TOML line " + std::to_string(n) + ": duplicate key " + full);
    doc.values_[full] = parse_value(s.substr(eq + 1), n);
  }
  return doc;
}

TomlDoc TomlDoc::parse_file(const fs::path& path) {
  std::ifstream is(path);
  require(is.is_open(), "cannot open config " + path.string());
  return parse(is);
}

double TomlDoc::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto* v = std::get_if<double>(&it->second);
  require(v != nullptr, "config key " + key + " must be a number");
  return *v;
}

long long TomlDoc::integer(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key, 0.0);
  require(v == static_cast<double>(static_cast<long long>(v)), "config key " + key + " must be an integer");
  return static_cast<long long>(v);
}

bool TomlDoc::boolean(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto* v = std::get_if<bool>(&it->second);
  require(v != nullptr, "config key " + key + " must be true or false");
  return *v;
}

std::string TomlDoc::string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto* v = std::get_if<std::string>(&it->second);
  require(v != nullptr, "config key " + key + " must be a string");
  return *v;
}

std::vector<double> TomlDoc::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto* v = std::get_if<std::vector<double>>(&it->second);
  require(v != nullptr, "config key " + key + " must be an array of numbers");
  return *v;
}

void TomlDoc::write(std::ostream& os) const {
  auto emit = [&os](const std::string& key, const TomlValue& v) {
    os << key << " = ";
    if (const auto* b = std::get_if<bool>(&v)) os << (*b ? "true" : "false");
    if (const auto* d = std::get_if<double>(&v)) os << g17(*d);
    if (const auto* s = std::get_if<std::string>(&v)) os << '"' << *s << '"';
    if (const auto* a = std::get_if<std::vector<double>>(&v)) {
      os << '[';
      for (std::size_t i = 0; i < a->size(); ++i) os << (i ? ", " : "") << g17((*a)[i]);
      os << ']';
    }
    os << '\n';
  };
  // Top-level keys first, then one block per table.
  std::map<std::string, std::vector<std::pair<std::string, const TomlValue*>>> tables;
  for (const auto& [k, v] : values_) {
    const auto dot = k.rfind('.');
    if (dot == std::string::npos)
      emit(k, v);
    else
      tables[k.substr(0, dot)].push_back({k.substr(dot + 1), &v});
  }
  for (const auto& [t, entries] : tables) {
    os << "\n[" << t << "]\n";
    for (const auto& [k, v] : entries) emit(k, *v);
  }
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    require(os.is_open(), "cannot write " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.close();
    if (!os) throw NumericalError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

StagedOutput::StagedOutput(fs::path out, const std::string& tag) : out_(std::move(out)) {
  stage_ = out_ / "_incomplete" / tag;
  fs::remove_all(stage_);
  fs::create_directories(stage_);
}

void StagedOutput::write(const std::string& name, const std::string& content) const {
  write_file_atomic(stage_ / name, content);
}

void StagedOutput::commit() {
  for (const auto& entry : fs::directory_iterator(stage_)) {
    const fs::path target = out_ / entry.path().filename();
    if (fs::exists(target)) fs::remove_all(target);
    fs::rename(entry.path(), target);
  }
  fs::remove(stage_);
  std::error_code ec;
  fs::remove(out_ / "_incomplete", ec);  // only succeeds when empty
}

}  // namespace cmcf::io
