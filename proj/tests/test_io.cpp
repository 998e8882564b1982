#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmcf/cli.hpp"
#include "cmcf/error.hpp"
#include "cmcf/io.hpp"

using namespace cmcf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cmcf_test_" + name);
  fs::remove_all(p);
  return p;
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CMCF1 round trip") {
    const HalfSpaceGrid g(9, 7, 5, 0.125, -0.5, -0.375);
    BinarySet e(g);
    for (std::size_t c = 0; c < g.size(); c += 3) e.set(c, true);
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    io::write_dump(ss, e);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 5) == "CMCF1");
    CHECK(bytes.size() == 5 + 12 + 24 + (g.size() + 7) / 8);
    CHECK(static_cast<unsigned char>(bytes[5]) == 9);  // little endian nx
    // First cell is bit 0 of the first data byte.
    CHECK((static_cast<unsigned char>(bytes[41]) & 1) == 1);
    const auto back = io::read_dump(ss);
    CHECK(back == e);
    CHECK(back.grid() == g);
    std::stringstream bad("CMCF2");
    CHECK_THROWS_AS(io::read_dump(bad), PreconditionError);
  }

  TEST_CASE("VTK header and payload") {
    const HalfSpaceGrid g(4, 4, 4, 0.25);
    BinarySet e(g);
    e.set(1, 2, 3, true);
    std::ostringstream os;
    io::write_vtk(os, e);
    const std::string s = os.str();
    CHECK(s.find("DATASET STRUCTURED_POINTS") != std::string::npos);
    CHECK(s.find("DIMENSIONS 4 4 4") != std::string::npos);
    CHECK(s.find("SCALARS inside unsigned_char 1") != std::string::npos);
    std::size_t ones = 0;
    for (auto it = s.begin() + static_cast<long>(s.find("LOOKUP_TABLE")); it != s.end(); ++it) ones += *it == '1';
    CHECK(ones == 1);
  }

  TEST_CASE("TOML subset") {
    std::istringstream is(R"(# comment
h = 0.03125   # trailing
steps = 12
name = "run # 1"
flag = true
[beta]
kind = "sine"
taus = [0.04, 0.01, 2.5e-3]
)");
    const auto doc = io::TomlDoc::parse(is);
    CHECK(doc.number("h", 0) == 0.03125);
    CHECK(doc.integer("steps", 0) == 12);
    CHECK(doc.string("name", "") == "run # 1");
    CHECK(doc.boolean("flag", false));
    CHECK(doc.string("beta.kind", "") == "sine");
    CHECK(doc.numbers("beta.taus", {}) == std::vector<double>{0.04, 0.01, 0.0025});
    CHECK(doc.number("missing", 7.0) == 7.0);
    CHECK_THROWS_AS(doc.integer("h", 0), PreconditionError);
    CHECK_THROWS_AS(doc.string("h", ""), PreconditionError);
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(io::TomlDoc::parse(dup), PreconditionError);
    std::ostringstream os;
    doc.write(os);
    std::istringstream again(os.str());
    CHECK(io::TomlDoc::parse(again).values() == doc.values());
  }

  TEST_CASE("front CSV") {
    std::ostringstream os;
    io::write_front_csv(os, {AxisymFront::cap(0.5, 0.0, 4)});
    const std::string s = os.str();
    CHECK(s.rfind("t,idx,r,z\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 6);
  }

  TEST_CASE("staged output is quarantined until commit") {
    const auto out = scratch("stage");
    {
      io::StagedOutput st(out, "run");
      st.write("a.txt", "x");
      CHECK(fs::exists(out / "_incomplete" / "run" / "a.txt"));
    }
    CHECK(fs::exists(out / "_incomplete" / "run" / "a.txt"));
    io::StagedOutput st(out, "run");
    st.write("a.txt", "y");
    st.commit();
    CHECK(slurp(out / "a.txt") == "y");
    CHECK_FALSE(fs::exists(out / "_incomplete"));
    fs::remove_all(out);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("winterbottom rows") {
    std::string out;
    CHECK(cli({"winterbottom", "--beta0", "0", "--rho", "1"}, &out) == kExitPass);
    CHECK(out.find("volume,2.094395102") != std::string::npos);
    CHECK(cli({"winterbottom", "--beta0", "0.5", "--rho", "0.5"}, &out) == kExitPass);
    CHECK(out.find("energy,2.6507188") != std::string::npos);
    CHECK(cli({"winterbottom", "--beta0", "1.5"}, &out) == kExitConfigError);
  }

  TEST_CASE("usage errors") {
    CHECK(cli({}) == kExitConfigError);
    CHECK(cli({"bogus"}) == kExitConfigError);
    CHECK(cli({"--help"}) == kExitPass);
  }

  TEST_CASE("simulate writes a reproducible run") {
    const auto out = scratch("sim");
    const std::vector<std::string> args = {"simulate", "--out", out.string(), "--spacing", "0.0625", "--steps", "3",
                                           "--rho", "0.4", "--export-vtk"};
    std::string msg;
    REQUIRE(cli(args, &msg) == kExitPass);
    CHECK(fs::exists(out / "meta.toml"));
    for (int k = 0; k <= 3; ++k) {
      CHECK(fs::exists(out / ("step_000" + std::to_string(k) + ".cmcf")));
      CHECK(fs::exists(out / ("step_000" + std::to_string(k) + ".vtk")));
    }
    const std::string energies = slurp(out / "energies.csv");
    CHECK(energies.rfind("k,perimeter,adhesion,dissipation,total\n", 0) == 0);
    CHECK(std::count(energies.begin(), energies.end(), '\n') == 5);
    const auto e0 = io::read_dump(out / "step_0000.cmcf");
    CHECK(e0.count() > 0);
    REQUIRE(cli(args) == kExitPass);
    CHECK(slurp(out / "energies.csv") == energies);
    fs::remove_all(out);
  }

  TEST_CASE("simulate rejects bad configs with exit 2") {
    const auto out = scratch("bad");
    std::string msg;
    CHECK(cli({"simulate", "--out", out.string(), "--tau", "0"}, &msg) == kExitConfigError);
    CHECK(msg.find("tau must be positive") != std::string::npos);
    const auto cfg = out.string() + ".toml";
    std::ofstream(cfg) << "h = 0.0625\n[shape]\nkind = \"torus\"\n";
    CHECK(cli({"simulate", "--out", out.string(), "--config", cfg}, &msg) == kExitConfigError);
    CHECK(msg.find("shape.kind") != std::string::npos);
    fs::remove(cfg);
    fs::remove_all(out);
  }

  TEST_CASE("flags override the config file") {
    const auto out = scratch("override");
    const auto cfg = out.string() + ".toml";
    std::ofstream(cfg) << "h = 0.0625\nsteps = 5\n[shape]\nrho = 0.4\n";
    REQUIRE(cli({"simulate", "--out", out.string(), "--config", cfg, "--steps", "1"}) == kExitPass);
    CHECK(fs::exists(out / "step_0001.cmcf"));
    CHECK_FALSE(fs::exists(out / "step_0002.cmcf"));
    fs::remove(cfg);
    fs::remove_all(out);
  }

  TEST_CASE("failing suite exits 1 and lists the failure") {
    const auto out = scratch("verify");
    const auto cfg = out.string() + ".toml";
    // Two steps leave a single pair, too few for the exponent fit.
    std::ofstream(cfg) << "[holder]\nh = 0.0625\nr0 = 0.3\nhorizon = 0.03\n";
    std::string msg;
    CHECK(cli({"verify", "--out", out.string(), "--config", cfg, "--suite", "holder"}, &msg) == kExitSuiteFailure);
    CHECK(msg.find("failed: time exponent") != std::string::npos);
    CHECK(fs::exists(out / "holder.json"));
    fs::remove(cfg);
    fs::remove_all(out);
  }

  TEST_CASE("unknown suite is a config error") {
    const auto out = scratch("unknown");
    CHECK(cli({"verify", "--out", out.string(), "--suite", "nope"}) == kExitConfigError);
    fs::remove_all(out);
  }
}
