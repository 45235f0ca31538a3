#ifndef LFCOMP_CLI_JOB_HPP
#define LFCOMP_CLI_JOB_HPP

// Batch jobs: a JSON file names a space, a set of maps and one command.
//
//   {
//     "space": {"kind": "hardy"},            // or bergman + alpha, weighted_hardy + gamma
//     "dim": 2,                              // optional, inferred from the maps
//     "maps": {
//       "phi": {"A": [[[1,0],[0,0]], [[0,0],[0.5,0]]], "B": [[0,0],[0,0]],
//               "C": [[0,0],[0,0]], "d": [1,0]},
//       "psi": {"siegel": {"b": [1,1]}}      // translation form in the Siegel domain
//     },
//     "command": "verdict",                  // witness | matrix | spectrum | geometry-check
//     "pair": ["phi", "psi"],
//     "params": {"D": 14, "m": 10, "k": 1},
//     "seed": 7
//   }
//
// Complex entries are [re, im] pairs; a bare number is read as real.
// Keys of every JSON object in the report are sorted, so a job and a seed
// determine the report byte for byte.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfcomp/operators.hpp"
#include "lfcomp/witness.hpp"

namespace lfcomp::cli {

using Json = nlohmann::json;

enum ExitCode : int { kOk = 0, kParseError = 2, kPreconditionError = 3, kNumericalError = 4 };

struct ParseError : Error {
  int line;
  ParseError(int l, const std::string& msg) : Error(msg), line(l) {}
};

struct JobSpec {
  SpaceSpec space = SpaceSpec::hardy(1);
  Json space_json;
  std::map<std::string, LinFracMap> maps;
  std::string command;
  std::vector<std::string> pair;
  Json params = Json::object();
  std::uint64_t seed = 0;
};

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the last key in `path`, found by scanning for the quoted keys in order.
inline int locate(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  std::size_t found = 0;
  for (const auto& key : path) {
    const std::size_t p = text.find('"' + key + '"', pos);
    if (p == std::string::npos) break;
    found = p;
    pos = p + key.size() + 2;
  }
  return line_of_offset(text, found);
}

inline std::string dotted(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& k : path) out += (out.empty() ? "" : ".") + k;
  return out;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    throw ParseError(locate(text_, path), dotted(path) + ": " + msg);
  }

  Complex complex(const Json& j, const std::vector<std::string>& path) const {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(path, "expected a complex number [re, im]");
  }

  CVector vector(const Json& j, int n, const std::vector<std::string>& path) const {
    if (!j.is_array()) fail(path, "expected an array of complex numbers");
    if (n >= 0 && static_cast<int>(j.size()) != n) {
      fail(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
    }
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex(j[i], path);
    return v;
  }

  CMatrix matrix(const Json& j, int n, const std::vector<std::string>& path) const {
    if (!j.is_array()) fail(path, "expected a matrix (array of rows)");
    const int rows = static_cast<int>(j.size());
    if (n >= 0 && rows != n) fail(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(rows));
    CMatrix m(rows, rows);
    for (int r = 0; r < rows; ++r) {
      const Json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != rows) {
        fail(path, "expected a " + std::to_string(rows) + "x" + std::to_string(rows) + " matrix, row " +
                       std::to_string(r) + " has " + (row.is_array() ? std::to_string(row.size()) : "no") +
                       " entries");
      }
      for (int c = 0; c < rows; ++c) m(r, c) = complex(row[static_cast<std::size_t>(c)], path);
    }
    return m;
  }

 private:
  std::string text_;
};

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

inline Json matrix_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline int infer_dim(const Json& j) {
  if (j.contains("A") && j["A"].is_array()) return static_cast<int>(j["A"].size());
  if (j.contains("siegel") && j["siegel"].is_object()) {
    const Json& s = j["siegel"];
    if (s.contains("delta") && s["delta"].is_array()) return static_cast<int>(s["delta"].size()) + 1;
    return 1;
  }
  return -1;
}

}  // namespace detail

/// Descriptor of a map as written in jobs and reports (canonical scaling).
inline Json map_to_json(const LinFracMap& m) {
  return Json{{"A", detail::matrix_json(m.A())},
              {"B", detail::vector_json(m.B())},
              {"C", detail::vector_json(m.C())},
              {"d", detail::complex_json(m.d())}};
}

inline LinFracMap map_from_json(const Json& j, int n, const detail::Reader& rd, const std::vector<std::string>& path) {
  if (!j.is_object()) rd.fail(path, "expected an object with A, B, C, d or a siegel form");
  if (j.contains("siegel")) {
    auto p = path;
    p.push_back("siegel");
    const Json& s = j["siegel"];
    if (!s.is_object()) rd.fail(p, "expected an object");
    SiegelParabolicForm f;
    const int m = n - 1;
    f.delta = s.contains("delta") ? rd.vector(s["delta"], m, {p[0], p[1], "siegel", "delta"}) : CVector(CVector::Zero(m));
    f.b = s.contains("b") ? rd.complex(s["b"], {p[0], p[1], "siegel", "b"}) : Complex(0.0, 0.0);
    f.amat = s.contains("A") ? rd.matrix(s["A"], m, {p[0], p[1], "siegel", "A"}) : CMatrix(CMatrix::Identity(m, m));
    f.gamma = s.contains("gamma") ? rd.vector(s["gamma"], m, {p[0], p[1], "siegel", "gamma"}) : CVector(CVector::Zero(m));
    return from_siegel_parabolic(f);
  }
  if (!j.contains("A")) rd.fail(path, "missing key A");
  auto sub = [&](const char* k) {
    auto p = path;
    p.push_back(k);
    return p;
  };
  const CMatrix A = rd.matrix(j["A"], n, sub("A"));
  const CVector B = j.contains("B") ? rd.vector(j["B"], n, sub("B")) : CVector(CVector::Zero(n));
  const CVector C = j.contains("C") ? rd.vector(j["C"], n, sub("C")) : CVector(CVector::Zero(n));
  const Complex d = j.contains("d") ? rd.complex(j["d"], sub("d")) : Complex(1.0, 0.0);
  try {
    return LinFracMap(A, B, C, d);
  } catch (const DomainError& e) {
    rd.fail(path, e.what());
  }
}

inline SpaceSpec space_from_json(const Json& j, int n, const detail::Reader& rd) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    rd.fail({"space"}, "expected {\"kind\": \"hardy\" | \"bergman\" | \"weighted_hardy\"}");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "hardy") return SpaceSpec::hardy(n);
    if (kind == "bergman") {
      const double alpha = j.contains("alpha") && j["alpha"].is_number() ? j["alpha"].get<double>() : 0.0;
      return SpaceSpec::bergman(n, alpha);
    }
    if (kind == "weighted_hardy") {
      if (!j.contains("gamma") || !j["gamma"].is_number()) rd.fail({"space", "gamma"}, "weighted_hardy needs gamma");
      return SpaceSpec::weighted_hardy(n, WeightSequence::power_law(j["gamma"].get<double>()));
    }
  } catch (const DomainError& e) {
    rd.fail({"space"}, e.what());
  }
  rd.fail({"space", "kind"}, "unknown space kind '" + kind + "'");
}

/// Parses a job; every error is a ParseError carrying the offending line.
inline JobSpec parse_job(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), std::string("malformed JSON: ") + e.what());
  }
  const detail::Reader rd(text);
  if (!root.is_object()) throw ParseError(1, "job must be a JSON object");
  JobSpec job;
  if (!root.contains("maps") || !root["maps"].is_object() || root["maps"].empty()) {
    rd.fail({"maps"}, "expected a non-empty object of named maps");
  }
  int n = -1;
  if (root.contains("dim")) {
    if (!root["dim"].is_number_integer() || root["dim"].get<int>() < 1) rd.fail({"dim"}, "expected a positive integer");
    n = root["dim"].get<int>();
  } else {
    for (const auto& [name, mj] : root["maps"].items()) {
      n = detail::infer_dim(mj);
      if (n > 0) break;
    }
    if (n < 1) rd.fail({"maps"}, "cannot infer the dimension; give \"dim\"");
  }
  for (const auto& [name, mj] : root["maps"].items()) {
    job.maps.emplace(name, map_from_json(mj, n, rd, {"maps", name}));
  }
  job.space_json = root.contains("space") ? root["space"] : Json{{"kind", "hardy"}};
  job.space = space_from_json(job.space_json, n, rd);
  if (!root.contains("command") || !root["command"].is_string()) rd.fail({"command"}, "missing command");
  job.command = root["command"].get<std::string>();
  static const std::vector<std::string> commands = {"verdict", "witness", "matrix", "spectrum", "geometry-check"};
  if (std::find(commands.begin(), commands.end(), job.command) == commands.end()) {
    rd.fail({"command"}, "unknown command '" + job.command + "'");
  }
  if (root.contains("pair")) {
    const Json& p = root["pair"];
    if (!p.is_array() || p.empty() || p.size() > 2) rd.fail({"pair"}, "expected one or two map names");
    for (const auto& e : p) {
      if (!e.is_string()) rd.fail({"pair"}, "map names must be strings");
      const std::string nm = e.get<std::string>();
      if (!job.maps.count(nm)) rd.fail({"pair"}, "undefined map '" + nm + "'");
      job.pair.push_back(nm);
    }
  } else {
    for (const auto& [name, m] : job.maps) {
      if (job.pair.size() < 2) job.pair.push_back(name);
    }
  }
  const bool needs_two = job.command == "verdict" || job.command == "witness" || job.command == "spectrum";
  if (needs_two && job.pair.size() != 2) rd.fail({"pair"}, "command '" + job.command + "' needs two maps");
  if (root.contains("params")) {
    if (!root["params"].is_object()) rd.fail({"params"}, "expected an object");
    job.params = root["params"];
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) rd.fail({"seed"}, "expected a non-negative integer");
    job.seed = root["seed"].get<std::uint64_t>();
  }
  return job;
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> degree;
};

struct RunResult {
  int exit_code = kOk;
  Json report;
  std::string text;
  std::string csv;  // empty when the command produced no sequence
};

namespace detail {

inline Json record_json(const WitnessRecord& r) {
  return Json{{"n", r.n},
              {"z", vector_json(r.z)},
              {"z_norm", number(r.z_norm)},
              {"one_minus_norm", number(r.one_minus_norm)},
              {"rho", number(r.rho)},
              {"ratio1", number(r.ratio1)},
              {"ratio2", number(r.ratio2)},
              {"eq1", number(r.eq1)},
              {"kernel_norm_sq", number(r.kernel_norm_sq)}};
}

inline const char* criterion_label(WitnessKind k) {
  switch (k) {
    case WitnessKind::kBoundaryMismatch: return "boundary value mismatch: normalized kernel sequence at the contact point";
    case WitnessKind::kDerivativeMismatch: return "boundary derivative mismatch: kernel sequence inside a Koranyi aperture";
    case WitnessKind::kParabolicEllipsoid: return "parabolic pair: constant pseudo-hyperbolic gap on a horizontal level set";
    case WitnessKind::kSliceLimit: return "normal-form slice: positive limit of the pseudo-hyperbolic gap along a complex geodesic";
    case WitnessKind::kNone: return "none";
  }
  return "?";
}

inline Json certificate_json(const WitnessCertificate& c) {
  Json j{{"kind", to_string(c.kind)},
         {"criterion", criterion_label(c.kind)},
         {"quantity", c.quantity},
         {"claimed_inf", number(c.claimed_inf)},
         {"chain", c.chain},
         {"contact_point", vector_json(c.contact_point)},
         {"d1_phi", complex_json(c.d1_phi)},
         {"d1_psi", complex_json(c.d1_psi)}};
  Json recs = Json::array();
  for (const auto& r : c.records) recs.push_back(record_json(r));
  j["records"] = recs;
  Json red = Json::array();
  for (const auto& r : c.reduced_records) red.push_back(record_json(r));
  j["reduced_records"] = red;
  if (c.kind == WitnessKind::kDerivativeMismatch) j["aperture_M"] = c.M;
  if (c.kind == WitnessKind::kBoundaryMismatch || c.kind == WitnessKind::kDerivativeMismatch) {
    j["cross_term_tail"] = number(c.cross_term_tail);
  }
  if (c.kind == WitnessKind::kParabolicEllipsoid) {
    j["parabolic"] = Json{{"k", c.k},
                          {"k_phi", c.k_phi},
                          {"k_psi", c.k_psi},
                          {"c", vector_json(c.c)},
                          {"rho_constant", number(c.rho_constant)},
                          {"rho_stddev", number(c.rho_stddev)},
                          {"ratio_limit_expected", number(c.ratio_limit_expected)},
                          {"ratio_limit_observed", number(c.ratio_limit_observed)},
                          {"taylor_factor_last", number(c.taylor_factor_last)}};
  }
  if (c.slice) {
    const auto& s = *c.slice;
    j["slice"] = Json{{"j", s.j},
                      {"Z", vector_json(s.Z)},
                      {"W", vector_json(s.W)},
                      {"limit_value", number(s.limit_value)},
                      {"rho_limit", number(s.rho_limit)},
                      {"direct_limit", number(s.direct_limit)},
                      {"direct_error", number(s.direct_error)}};
  }
  return j;
}

inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string witness_csv(const WitnessCertificate& c) {
  std::ostringstream os;
  os << "n,|z|,rho,ratio1,ratio2,eq1,kernel_norm_sq\n";
  for (const auto& r : c.records) {
    os << r.n << ',' << fmt17(r.z_norm) << ',' << fmt17(r.rho) << ',' << fmt17(r.ratio1) << ',' << fmt17(r.ratio2)
       << ',' << fmt17(r.eq1) << ',' << fmt17(r.kernel_norm_sq) << '\n';
  }
  return os.str();
}

inline std::string certificate_text(const WitnessCertificate& c) {
  std::ostringstream os;
  os << "certificate: " << to_string(c.kind) << "\n";
  os << "criterion:   " << criterion_label(c.kind) << "\n";
  os << "quantity:    " << c.quantity << ", inf over " << c.records.size() << " points = " << fmt17(c.claimed_inf) << "\n";
  for (const auto& s : c.chain) os << "  - " << s << "\n";
  if (!c.records.empty()) {
    const auto& r = c.records.back();
    os << "last point:  1-|z| = " << fmt17(r.one_minus_norm) << ", rho = " << fmt17(r.rho) << ", eq1 = " << fmt17(r.eq1)
       << "\n";
  }
  if (c.slice) os << "slice limit: " << fmt17(c.slice->limit_value) << " (rho -> " << fmt17(c.slice->rho_limit) << ")\n";
  return os.str();
}

inline double param(const Json& p, const char* key, double dflt) {
  return p.contains(key) && p[key].is_number() ? p[key].get<double>() : dflt;
}

inline WitnessConfig witness_config(const JobSpec& job) {
  WitnessConfig cfg;
  cfg.k = param(job.params, "k", 1.0);
  cfg.M = param(job.params, "M", 0.0);
  if (job.params.contains("c")) {
    const Reader dummy(std::string{});
    try {
      cfg.c = dummy.vector(job.params["c"], job.space.dim - 1, {"params", "c"});
    } catch (const ParseError& e) {
      throw PreconditionError(e.what());
    }
  }
  if (job.params.contains("t_grid") && job.params["t_grid"].is_array()) {
    for (const auto& t : job.params["t_grid"]) cfg.t_grid.push_back(t.get<double>());
  }
  return cfg;
}

}  // namespace detail

/// Executes one job. Library preconditions map to exit 3, numerical
/// failures and inconclusive verdicts to exit 4; reports are produced in
/// every case.
inline RunResult run_job(const JobSpec& job, const RunOptions& opt = {}) {
  using detail::number;
  RunResult res;
  const std::uint64_t seed = opt.seed.value_or(job.seed);
  const int degree = opt.degree.value_or(static_cast<int>(detail::param(job.params, "D", 14)));
  Json& rep = res.report;
  rep["command"] = job.command;
  rep["space"] = job.space.label();
  rep["space_descriptor"] = job.space_json;
  rep["dim"] = job.space.dim;
  rep["seed"] = seed;
  rep["pair"] = job.pair;
  Json maps = Json::object();
  for (const auto& [name, m] : job.maps) maps[name] = map_to_json(m);
  rep["maps"] = maps;
  std::ostringstream txt;
  txt << "space: " << job.space.label() << "\ncommand: " << job.command << "\n";
  for (const auto& nm : job.pair) txt << "map " << nm << "\n";

  try {
    const LinFracMap& phi = job.maps.at(job.pair.at(0));
    if (job.command == "verdict") {
      const LinFracMap& psi = job.maps.at(job.pair.at(1));
      const Verdict v = compactness_verdict(phi, psi, job.space, detail::witness_config(job));
      rep["verdict"] = to_string(v.outcome);
      rep["sup_phi"] = number(v.sup_phi);
      rep["sup_psi"] = number(v.sup_psi);
      rep["diagnostics"] = v.diagnostics;
      txt << "verdict: " << to_string(v.outcome) << "\n";
      txt << "sup norms: " << detail::fmt17(v.sup_phi) << ", " << detail::fmt17(v.sup_psi) << "\n";
      switch (v.outcome) {
        case Verdict::Outcome::kEqual: txt << "C_phi - C_psi = 0\n"; break;
        case Verdict::Outcome::kCompactBothSmall:
          txt << "both sup norms are below 1, so each composition operator is compact\n";
          break;
        default: break;
      }
      if (v.certificate) {
        rep["certificate"] = detail::certificate_json(*v.certificate);
        txt << detail::certificate_text(*v.certificate);
        res.csv = detail::witness_csv(*v.certificate);
      }
      if (!v.diagnostics.empty()) txt << "diagnostics: " << v.diagnostics << "\n";
      if (v.outcome == Verdict::Outcome::kInconclusive) res.exit_code = kNumericalError;
    } else if (job.command == "witness") {
      const LinFracMap& psi = job.maps.at(job.pair.at(1));
      const std::string kind = job.params.value("kind", std::string("parabolic"));
      const WitnessConfig cfg = detail::witness_config(job);
      WitnessCertificate cert;
      if (kind == "parabolic") {
        cert = parabolic_witness(phi, psi, cfg, job.space);
      } else if (kind == "boundary") {
        CVector zeta = unit_vector(job.space.dim);
        if (job.params.contains("zeta")) {
          const detail::Reader dummy(std::string{});
          try {
            zeta = dummy.vector(job.params["zeta"], job.space.dim, {"params", "zeta"});
          } catch (const ParseError& e) {
            throw PreconditionError(e.what());
          }
        }
        cert = boundary_witness(phi, psi, zeta, job.space, cfg);
      } else {
        throw PreconditionError("witness: params.kind must be 'parabolic' or 'boundary'");
      }
      rep["certificate"] = detail::certificate_json(cert);
      txt << detail::certificate_text(cert);
      res.csv = detail::witness_csv(cert);
    } else if (job.command == "matrix") {
      const TruncatedOperator op = composition_matrix(phi, job.space, degree);
      rep["degree"] = degree;
      rep["size"] = op.matrix.rows();
      rep["frobenius_norm"] = number(op.matrix.norm());
      rep["matrix"] = detail::matrix_json(op.matrix);
      std::mt19937_64 rng(seed);
      Json resid = Json::array();
      for (int i = 0; i < 3; ++i) {
        const CVector z = 0.5 * sample_sphere(job.space.dim, rng);
        resid.push_back(Json{{"z", detail::vector_json(z)}, {"adjoint_kernel_residual", number(adjoint_kernel_residual(op, phi, z))}});
      }
      rep["adjoint_checks"] = resid;
      txt << "truncated matrix of C_phi: " << op.matrix.rows() << " x " << op.matrix.cols() << " (D = " << degree
          << "), Frobenius norm " << detail::fmt17(op.matrix.norm()) << "\n";
    } else if (job.command == "spectrum") {
      const LinFracMap& psi = job.maps.at(job.pair.at(1));
      const int m = static_cast<int>(detail::param(job.params, "m", 10));
      const auto sv = difference_singular_values(phi, psi, job.space, degree, m);
      rep["degree"] = degree;
      rep["singular_values"] = sv;
      txt << "top " << m << " singular values of the truncated C_phi - C_psi (D = " << degree << "):\n";
      for (double s : sv) txt << "  " << detail::fmt17(s) << "\n";
    } else {  // geometry-check
      Json maps_geo = Json::object();
      std::mt19937_64 rng(seed);
      for (const auto& nm : job.pair) {
        const LinFracMap& f = job.maps.at(nm);
        Json g;
        const SelfMapCheck chk = check_self_map(f);
        g["is_self_map"] = chk.is_self_map;
        g["pole_margin"] = number(chk.pole_margin);
        g["sup_norm"] = number(chk.sup_norm);
        if (chk.is_self_map) {
          const auto bfp = boundary_fixed_points(f);
          Json pts = Json::array();
          for (const auto& p : bfp.points) pts.push_back(detail::vector_json(p));
          g["boundary_fixed_points"] = pts;
          g["boundary_fixed_continua"] = bfp.continua.size();
          g["fixes_whole_sphere"] = bfp.whole_sphere;
          if (fixes_point(f, unit_vector(f.dim()))) g["e1_class"] = to_string(classify_fixing_e1(f));
          g["krein_adjoint"] = map_to_json(krein_adjoint(f));
          g["affine_range_dimension"] = affine_range_dimension(f);
        }
        // Schwarz-Pick: rho(f z, f w) <= rho(z, w)
        double worst = -1.0;
        if (chk.is_self_map) {
          for (int i = 0; i < 200; ++i) {
            std::uniform_real_distribution<double> rad(0.0, 0.99);
            const CVector z = rad(rng) * sample_sphere(f.dim(), rng);
            const CVector w = rad(rng) * sample_sphere(f.dim(), rng);
            worst = std::max(worst, pseudo_hyperbolic_distance(f(z), f(w)) - pseudo_hyperbolic_distance(z, w));
          }
        }
        g["schwarz_pick_max_excess"] = number(worst);
        maps_geo[nm] = g;
        txt << nm << ": self-map " << (chk.is_self_map ? "yes" : "no") << ", sup norm " << detail::fmt17(chk.sup_norm)
            << "\n";
      }
      rep["geometry"] = maps_geo;
    }
  } catch (const PreconditionError& e) {
    res.exit_code = kPreconditionError;
    rep["error"] = std::string("precondition: ") + e.what();
  } catch (const NumericalFailure& e) {
    res.exit_code = kNumericalError;
    rep["error"] = std::string("numerical failure: ") + e.what();
  } catch (const DomainError& e) {
    res.exit_code = kPreconditionError;
    rep["error"] = std::string("precondition: ") + e.what();
  }
  if (rep.contains("error")) txt << "error: " << rep["error"].get<std::string>() << "\n";
  rep["exit_code"] = res.exit_code;
  res.text = txt.str();
  return res;
}

/// Writes report.txt, report.json and (when present) witness.csv into dir.
inline void write_outputs(const std::filesystem::path& dir, const RunResult& res) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.txt") << res.text;
  std::ofstream(dir / "report.json") << res.report.dump(2) << "\n";
  if (!res.csv.empty()) std::ofstream(dir / "witness.csv") << res.csv;
}

}  // namespace lfcomp::cli

#endif  // LFCOMP_CLI_JOB_HPP
