#include "cmcf/capillary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "cmcf/error.hpp"

namespace cmcf {

AdhesionField::AdhesionField(HalfSpaceGrid grid, std::vector<double> beta, double eta)
    : grid_(grid), beta_(std::move(beta)), eta_(eta) {
  require(beta_.size() == static_cast<std::size_t>(grid_.nx()) * grid_.ny(),
          "AdhesionField: expected nx*ny beta values");
  require(eta > 0.0 && eta < 0.5, "AdhesionField: eta must lie in (0, 1/2)");
  for (double b : beta_) require(std::isfinite(b), "AdhesionField: beta must be finite");
  // A few ulps of slack so that constant(beta) with the default eta passes.
  require(max_abs() <= (1.0 - 2.0 * eta) * (1.0 + 1e-12),
          "AdhesionField: coercivity violated, need max|beta| <= 1 - 2 eta");
}

AdhesionField AdhesionField::constant(const HalfSpaceGrid& grid, double beta) {
  require(std::abs(beta) < 1.0, "AdhesionField: |beta| must be < 1");
  return constant(grid, beta, std::min(0.5 * (1.0 - std::abs(beta)), std::nextafter(0.5, 0.0)));
}

AdhesionField AdhesionField::constant(const HalfSpaceGrid& grid, double beta, double eta) {
  return AdhesionField(grid, std::vector<double>(static_cast<std::size_t>(grid.nx()) * grid.ny(), beta),
                       eta);
}

double AdhesionField::max_abs() const {
  double m = 0.0;
  for (double b : beta_) m = std::max(m, std::abs(b));
  return m;
}

void AdhesionField::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "eta=" << eta_ << "\n";
  os << "i,j,beta\n";
  for (int j = 0; j < grid_.ny(); ++j)
    for (int i = 0; i < grid_.nx(); ++i) os << i << ',' << j << ',' << at(i, j) << '\n';
}

AdhesionField AdhesionField::read_csv(std::istream& is, const HalfSpaceGrid& grid) {
  std::vector<double> beta(static_cast<std::size_t>(grid.nx()) * grid.ny(),
                           std::numeric_limits<double>::quiet_NaN());
  double eta = -1.0;
  bool header = false;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("eta=", 0) == 0) {
      eta = std::stod(line.substr(4));
      continue;
    }
    if (line == "i,j,beta") {
      header = true;
      continue;
    }
    require(header, "AdhesionField CSV: missing header \"i,j,beta\"");
    std::istringstream row(line);
    std::string si, sj, sb;
    require(std::getline(row, si, ',') && std::getline(row, sj, ',') && std::getline(row, sb),
            "AdhesionField CSV: malformed row '" + line + "'");
    const int i = std::stoi(si), j = std::stoi(sj);
    require(i >= 0 && j >= 0 && i < grid.nx() && j < grid.ny(),
            "AdhesionField CSV: index out of range in row '" + line + "'");
    beta[static_cast<std::size_t>(j) * grid.nx() + i] = std::stod(sb);
  }
  require(eta > 0.0, "AdhesionField CSV: missing eta=<value> line");
  for (double b : beta) require(!std::isnan(b), "AdhesionField CSV: not every bottom cell has a beta");
  return AdhesionField(grid, std::move(beta), eta);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

double adhesion_integral(const BinarySet& e, const AdhesionField& beta) {
  const auto& g = e.grid();
  std::vector<double> terms;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (e.test(i, j, 0)) terms.push_back(beta.at(i, j));
  return pairwise_sum(terms) * g.h() * g.h();
}

}  // namespace

EnergyBreakdown capillary(const BinarySet& e, const AdhesionField& beta) {
  require(e.grid() == beta.grid(), "capillary: grid mismatch");
  EnergyBreakdown out;
  out.perimeter_term = perimeter(e);
  out.adhesion_term = adhesion_integral(e, beta);
  out.total = out.perimeter_term + out.adhesion_term;
  return out;
}

EnergyBreakdown atw(const BinarySet& e, const BinarySet& e0, const SignedDistanceField& sd0,
                    double tau, const AdhesionField& beta) {
  require(tau > 0.0, "atw: tau must be positive");
  require_same_grid(e, e0, "atw");
  require(sd0.grid() == e0.grid(), "atw: distance field grid mismatch");
  require(!sd0.empty_interface(), "atw: E0 has an empty relative boundary");
  EnergyBreakdown out = capillary(e, beta);
  // sum_E sd - sum_E0 sd, accumulated over the symmetric difference only.
  std::vector<double> terms;
  const auto a = e.bits();
  const auto b = e0.bits();
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c] == b[c]) continue;
    terms.push_back(a[c] ? sd0.at(c) : -sd0.at(c));
  }
  const double h = e.grid().h();
  out.dissipation_term = pairwise_sum(terms) * (h * h * h / tau);
  out.total = out.perimeter_term + out.adhesion_term + out.dissipation_term;
  return out;
}

EnergyBreakdown atw(const BinarySet& e, const BinarySet& e0, double tau, const AdhesionField& beta) {
  require(tau > 0.0, "atw: tau must be positive");
  return atw(e, e0, signed_distance(e0), tau, beta);
}

ContactAngleReport contact_angle_measure(const BinarySet& e, const AdhesionField& beta) {
  require(e.grid() == beta.grid(), "contact_angle_measure: grid mismatch");
  const auto& g = e.grid();
  ContactAngleReport report;

  std::vector<std::uint8_t> on_boundary(g.size(), 0);
  for (auto c : boundary_cells(e)) on_boundary[c] = 1;

  constexpr int kRadiusCells = 4;
  const double radius = kRadiusCells * g.h();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!e.test(i, j, 0)) continue;
      const bool contact = (i > 0 && !e.test(i - 1, j, 0)) || (i + 1 < g.nx() && !e.test(i + 1, j, 0)) ||
                           (j > 0 && !e.test(i, j - 1, 0)) || (j + 1 < g.ny() && !e.test(i, j + 1, 0));
      if (!contact) continue;
      const Vec3 x0 = g.center(i, j, 0);

      std::vector<Vec3> pts;
      Vec3 outward{};
      for (int k = 0; k <= kRadiusCells && k < g.nz(); ++k)
        for (int jj = std::max(0, j - kRadiusCells); jj <= std::min(g.ny() - 1, j + kRadiusCells); ++jj)
          for (int ii = std::max(0, i - kRadiusCells); ii <= std::min(g.nx() - 1, i + kRadiusCells); ++ii) {
            const Vec3 p = g.center(ii, jj, k);
            const Vec3 d = p - x0;
            if (dot(d, d) > radius * radius) continue;
            const std::size_t c = g.index(ii, jj, k);
            outward = outward + (e.test(c) ? -1.0 : 1.0) * d;
            if (on_boundary[c]) pts.push_back(p);
          }
      if (pts.size() < 3) continue;

      Eigen::Vector3d mean = Eigen::Vector3d::Zero();
      for (const auto& p : pts) mean += Eigen::Vector3d(p.x, p.y, p.z);
      mean /= static_cast<double>(pts.size());
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (const auto& p : pts) {
        const Eigen::Vector3d d = Eigen::Vector3d(p.x, p.y, p.z) - mean;
        cov += d * d.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
      Eigen::Vector3d n = eig.eigenvectors().col(0);
      if (n.dot(Eigen::Vector3d(outward.x, outward.y, outward.z)) < 0.0) n = -n;

      ContactSample s;
      s.cell = g.index(i, j, 0);
      s.normal_z = n.z();
      s.beta = beta.at(i, j);
      s.residual = s.normal_z + s.beta;
      report.samples.push_back(s);
    }

  if (!report.samples.empty()) {
    std::vector<double> abs_res;
    for (const auto& s : report.samples) {
      abs_res.push_back(std::abs(s.residual));
      report.max_abs_residual = std::max(report.max_abs_residual, std::abs(s.residual));
    }
    report.mean_abs_residual = pairwise_sum(abs_res) / static_cast<double>(abs_res.size());
  }
  return report;
}

}  // namespace cmcf
