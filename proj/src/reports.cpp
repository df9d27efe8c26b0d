#include "fracmap/reports.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "fracmap/error.hpp"

namespace fracmap {

std::string content_hash(const std::string& bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

Json point(const Point& p, int dim) {
  Json j = Json::array({p[0]});
  if (dim == 2) j.push_back(p[1]);
  return j;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* region_name(Region r) {
  switch (r) {
    case Region::chi1: return "chi1";
    case Region::chi2: return "chi2";
    default: return "chi3";
  }
}

}  // namespace

Json to_json(const SearchResult& r) {
  const auto& q = r.worst;
  return {{"alpha", r.config.alpha},
          {"epsilon", r.config.epsilon},
          {"dim", r.config.dim},
          {"samples", r.config.samples},
          {"seed", r.config.seed},
          {"box", r.config.box},
          {"c_emp", r.c_emp},
          {"skipped", r.skipped},
          {"mvt_constant", r.mvt_constant},
          {"chi1_ratio_range", {r.chi1_ratio_min, r.chi1_ratio_max}},
          {"worst",
           {{"index", r.worst_index},
            {"x", point(q.x, q.dim)},
            {"y", point(q.y, q.dim)},
            {"eta", point(q.eta, q.dim)},
            {"xi", point(q.xi, q.dim)},
            {"lhs", r.worst_lhs},
            {"types", {r.worst_types.type1, r.worst_types.type2, r.worst_types.type3, r.worst_types.type4}},
            {"eta_region", region_name(classify(q.x, q.y, q.eta, q.dim))},
            {"xi_region", region_name(classify(q.x, q.y, q.xi, q.dim))}}}};
}

Json to_json(const FrameConstants& c, const ThetaReport& t) {
  return {{"N", c.N},
          {"omega_count", c.omega_count},
          {"samples", c.samples},
          {"c_emp", c.c_emp},
          {"C_emp", c.C_emp},
          {"c_perp_emp", c.c_perp_emp},
          {"c_perp_mesh", optional_number(c.c_perp_mesh)},
          {"G_perp_mesh", optional_number(c.G_perp_mesh)},
          {"theta_emp", t.theta_emp},
          {"paper_theta", t.paper_theta},
          {"theta_meets_formula", t.meets_theta_formula()},
          {"c_proof", c.c_proof},
          {"meets_c_proof", c.meets_proof_floor()}};
}

Json to_json(const RatioReport& r, bool with_ratios) {
  Json j = {{"alpha", r.alpha},
            {"epsilon", r.epsilon},
            {"dim", r.dim},
            {"points_per_axis", r.points},
            {"samples", r.samples},
            {"max_ratio", r.max_ratio},
            {"quantiles", {{"0.5", r.quantiles[0]}, {"0.9", r.quantiles[1]}, {"0.99", r.quantiles[2]}}}};
  if (with_ratios) j["ratios"] = r.ratios;
  return j;
}

Json to_json(const DecayTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) rows.push_back({{"d", row.d}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"ratio", row.ratio}});
  return {{"alpha", t.alpha},
          {"r", t.r},
          {"q", t.q},
          {"rows", rows},
          {"nonincreasing", t.nonincreasing()},
          {"tail_exponent", optional_number(t.tail_exponent())}};
}

Json to_json(const LocalizedCommutatorReport& r) {
  return {{"alpha", r.alpha},   {"lambda", r.lambda}, {"r", r.r},
          {"gamma", r.gamma},   {"lhs", r.lhs},       {"groups", r.groups},
          {"rhs", r.rhs()},     {"ratio", r.ratio()}, {"dominant_group", r.dominant_group() + 1},
          {"tail", r.tail}};
}

Json to_json(const CriticalPointReport& r) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"eps_reg", r.eps_reg},
          {"final_tau", r.final_tau},
          {"initial_energy", r.energy_trace.front()},
          {"final_energy", r.energy_trace.back()},
          {"final_residual", r.residual_trace.back()},
          {"energy_monotone", r.energy_monotone()},
          {"max_sphere_defect", r.max_sphere_defect}};
}

Json to_json(const LocalizationReport& r) {
  return {{"winsphere_error", r.winsphere_error}, {"threecomm_error", r.threecomm_error}};
}

Json to_json(const SubcriticalSweep& s) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.radii.size(); ++i) {
    const auto& t = s.terms[i];
    rows.push_back({{"r", s.radii[i]}, {"I", t.I}, {"II", t.II}, {"III", t.III}, {"IV", t.IV}, {"sum", t.sum()}});
  }
  return {{"rows", rows}, {"gamma", optional_number(s.gamma)}, {"monotone", s.monotone()}};
}

Json to_json(const GrowthReport& g) {
  Json rows = Json::array();
  for (const auto& row : g.rows)
    rows.push_back({{"r", row.radius}, {"M", row.M}, {"normal", row.normal}, {"tangential", row.tangential}});
  return {{"rows", rows}, {"delta", optional_number(g.delta)}, {"delta_defined", g.delta.has_value()}};
}

Json to_json(const HolderReport& h) {
  return {{"radii", h.radii},
          {"oscillation", h.oscillation},
          {"gamma_emp", optional_number(h.gamma)},
          {"seminorm", optional_number(h.seminorm)},
          {"gamma_defined", h.gamma.has_value()}};
}

void write_json(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace fracmap
