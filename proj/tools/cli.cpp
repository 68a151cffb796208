#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lopt/acceptance.hpp"
#include "lopt/density.hpp"
#include "lopt/euclidean.hpp"
#include "lopt/fixed_point.hpp"
#include "lopt/potential.hpp"
#include "lopt/recursion.hpp"

namespace lopt::cli {

namespace {

constexpr long kMinPrecision = 64;
constexpr int kMaxOrder = 200;

Error bad_argument(const std::string& what) { return Error(ErrorKind::InvalidArgument, what); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) throw bad_argument("not an integer: '" + text + "'");
  return v;
}

struct RunConfig {
  std::string potential_path;
  int n = 0;
  int n1 = 0;
  int n2 = 0;
  int m1 = 2;
  int m2 = 0;
  int k_max = 10;
  std::string k_list = "10,20,30";
  std::string xi_grid = "0.2:3.0:15";
  std::string x_grid = "0:2:21";
  std::string p_kappa = "0,0.5,1";
  std::string x1 = "1";
  std::string x2 = "1";
  std::optional<long> precision_bits;
  std::string output;
};

// Evaluation options are not exposed; the header records the defaults in force.
std::string header(const Potential& pot, Precision p) {
  const EvalOptions eval;
  return "# potential=" + pot.describe() + "; precision=" + std::to_string(p.bits) +
         "; agreement_bits=" + std::to_string(eval.agreement_bits) + "; cap_factor=" + std::to_string(eval.cap_factor);
}

std::string quoted(const Rational& q) { return "\"" + to_string(q) + "\""; }

std::string num(const BigFloat& v) { return v.str(17); }
std::string num(const SignedLog& v) { return v.is_zero() ? "0" : v.value().str(17); }

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

// Point-level failures that leave one cell empty instead of aborting the table.
template <class F>
std::string cell(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::ZeroValue:
      case ErrorKind::ZeroNormalizer:
      case ErrorKind::NegativeRadicand:
        return "";
      default:
        throw;
    }
  }
}

std::vector<int> orders(const std::string& text, int lowest) {
  std::vector<int> ks = parse_int_list(text);
  for (int k : ks) {
    if (k < lowest || k > kMaxOrder) {
      throw bad_argument("order " + std::to_string(k) + " outside [" + std::to_string(lowest) + ", " +
                         std::to_string(kMaxOrder) + "]");
    }
  }
  return ks;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

void run_series(const RunConfig& c, const Potential& pot, Precision, Csv& csv) {
  if (c.k_max < 0 || c.k_max > kMaxOrder) throw bad_argument("--k-max must lie in [0, 200]");
  const auto s = compute_series(pot, c.n, c.k_max);
  csv.row({"n", "k", "kind", "power", "value"});
  for (int k = 0; k <= c.k_max; ++k) {
    csv.row({std::to_string(c.n), std::to_string(k), "energy", "", quoted(s.energies[k])});
    const WaveOrder& w = s.orders[k];
    for (int l = 0; l <= w.degree(); ++l) {
      const Rational b = w.coeff(l);
      if (b != 0) csv.row({std::to_string(c.n), std::to_string(k), "coeff", std::to_string(l), quoted(b)});
    }
  }
}

void run_curve(const RunConfig& c, const Potential& pot, Precision p, Csv& csv, bool prefactor) {
  const auto ks = orders(c.k_list, 1);
  const auto xs = parse_grid(c.xi_grid).points();
  const auto s = compute_series(pot, c.n, max_of(ks));
  const Trajectory tr(pot, p);
  std::vector<std::string> head = {"xi", prefactor ? "M" : "A"};
  for (int k : ks) {
    const std::string tag = std::to_string(k);
    if (prefactor) {
      head.push_back("M_" + tag);
      head.push_back("ratio_" + tag);
    } else {
      head.push_back("A_" + tag);
      head.push_back("absdiff_" + tag);
    }
  }
  csv.row(head);
  for (const Rational& q : xs) {
    const BigFloat xi(q, p);
    const BigFloat a = tr.exponent_A(xi);
    std::optional<BigFloat> m;
    if (prefactor) {
      try {
        m = tr.prefactor_M(c.n, xi);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NegativeRadicand) throw;
      }
    }
    std::vector<std::string> row = {quoted(q), prefactor ? (m ? num(*m) : "") : num(a)};
    for (int k : ks) {
      if (prefactor) {
        // the full form is M_n (k-1)! k^{n/2} e^{-kA}
        std::optional<BigFloat> mk;
        row.push_back(cell([&] {
          mk = convergence_profile_M(s, k, xi, a, p);
          return num(*mk);
        }));
        row.push_back(m && mk ? num(*mk / (*m * pow(sqrt(BigFloat(k, p)), c.n))) : "");
      } else {
        std::optional<BigFloat> ak;
        row.push_back(cell([&] {
          ak = convergence_profile_A(s, k, xi, p);
          return num(*ak);
        }));
        row.push_back(ak ? num(abs(*ak - a)) : "");
      }
    }
    csv.row(row);
  }
}

void run_fixed_x(const RunConfig& c, const Potential& pot, Precision p, Csv& csv) {
  const auto ks = orders(c.k_list, 1);
  const auto xs = parse_grid(c.x_grid).points();
  const auto s = compute_series(pot, 0, max_of(ks));
  // unit x² coefficient: f0 = 2G starts as (2/√π) x²
  const auto f0 = build_ladder(0);
  const BigFloat norm = sqrt(pi(p)) / 2;
  std::vector<std::string> head = {"x", "X0"};
  for (int k : ks) {
    head.push_back("X0_" + std::to_string(k));
    head.push_back("absdiff_" + std::to_string(k));
  }
  csv.row(head);
  for (const Rational& q : xs) {
    const BigFloat x(q, p);
    const BigFloat limit = eval_ladder(f0, x, p) * norm;
    std::vector<std::string> row = {quoted(q), num(limit)};
    for (int k : ks) {
      std::optional<BigFloat> v;
      row.push_back(cell([&] {
        v = fixed_x_profile(s, k, x, p);
        return num(*v);
      }));
      row.push_back(v ? num(abs(*v - limit)) : "");
    }
    csv.row(row);
  }
}

void run_eigen_ratio(const RunConfig& c, const Potential& pot, Precision p, Csv& csv) {
  const auto ks = orders(c.k_list, 1);
  const auto s = compute_series(pot, c.n, max_of(ks));
  const EuclideanConstants consts = euclidean_constants(pot, p);
  csv.row({"n", "k", "energy", "energy_value", "asymptotic", "ratio"});
  for (int k : ks) {
    const SignedLog exact = SignedLog::from_rational(s.energies[k], p);
    const SignedLog asym = energy_asymptotic(consts, c.n, k, p);
    const std::string ratio =
        exact.is_zero() ? "0" : num(exp(SignedLog::log_ratio(exact, asym)) * (exact.sign() * asym.sign()));
    csv.row({std::to_string(c.n), std::to_string(k), quoted(s.energies[k]), num(exact), num(asym), ratio});
  }
}

void run_matelem(const RunConfig& c, const Potential& pot, Precision p, Csv& csv) {
  if (c.m1 < 0 || c.m2 < 0) throw bad_argument("--m1 and --m2 must be non-negative");
  const auto ks = orders(c.k_list, 1);
  const auto s1 = compute_series(pot, c.n1, max_of(ks));
  const auto s2 = compute_series(pot, c.n2, max_of(ks));
  const Trajectory tr(pot, p);
  const bool odd = (c.n1 + c.n2 + c.m1 + c.m2) % 2 != 0;
  // exact = r √π in the unnormalized convention
  csv.row({"k", "exact_over_sqrt_pi", "exact", "asymptotic", "ratio"});
  for (int k : ks) {
    const ExactGaussianValue e = matrix_element_exact(s1, s2, c.m1, c.m2, k);
    const SignedLog exact = SignedLog::from_value(e.value(p));
    std::string asym = "0", ratio = "";
    if (!odd) {
      const SignedLog a = matrix_element_asymptotic(tr, c.n1, c.n2, c.m1, c.m2, k);
      asym = num(a);
      if (!exact.is_zero()) ratio = num(exp(SignedLog::log_ratio(exact, a)) * (exact.sign() * a.sign()));
    }
    csv.row({std::to_string(k), quoted(e.r), num(exact), asym, ratio});
  }
}

void run_density(const RunConfig& c, const Potential& pot, Precision p, Csv& csv) {
  const auto ks = orders(c.k_list, 1);
  const Rational x1 = parse_number(c.x1), x2 = parse_number(c.x2);
  const auto s1 = compute_series(pot, c.n1, max_of(ks));
  const auto s2 = compute_series(pot, c.n2, max_of(ks));
  const Trajectory tr(pot, p);
  const EuclideanConstants& consts = tr.constants();
  csv.row({"k", "x1", "x2", "polynomial", "exponent", "exact", "asymptotic", "ratio", "region"});
  for (int k : ks) {
    const RhoOrderExact e = rho_order_exact(s1, s2, k, x1, x2);
    const SignedLog exact = e.value(p);
    const SignedLog a = rho_asymptotic(tr, c.n1, c.n2, k, BigFloat(x1, p), BigFloat(x2, p));
    const std::string ratio =
        exact.is_zero() ? "0" : num(exp(SignedLog::log_ratio(exact, a)) * (exact.sign() * a.sign()));
    // κ = 1, η = x/√k on the diagonal: A above Q+/√s∞, B below
    std::string region;
    if (x1 == x2) {
      const BigFloat eta2 = BigFloat(x1 * x1, p) / k;
      region = eta2 * consts.s_infinity > consts.q_plus * consts.q_plus ? "A" : "B";
    }
    csv.row({std::to_string(k), quoted(x1), quoted(x2), quoted(e.polynomial), quoted(e.exponent), num(exact), num(a),
             ratio, region});
  }
}

void run_trajectories(const RunConfig& c, const Potential& pot, Precision p, Csv& csv) {
  const auto ps = parse_number_list(c.p_kappa);
  const Trajectory tr(pot, p);
  const auto& g = tr.samples();
  std::vector<std::string> m;
  for (const auto& pt : g) {
    m.push_back(cell([&] { return num(tr.prefactor_at(c.n, pt)); }));
  }
  csv.row({"p_kappa", "tau", "q", "branch", "xi", "A", "M", "kappa", "eta"});
  for (const Rational& pk : ps) {
    const BigFloat pb(pk, p);
    const auto curve = tr.kappa_eta_curve(pb);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& pt = g[i];
      csv.row({quoted(pk), num(pt.tau), num(pt.q), pt.branch == Branch::Rising ? "rising" : "falling", num(pt.xi),
               num(pt.a), m[i], num(curve[i].first), num(curve[i].second)});
    }
  }
}

int run_verify(const Potential& pot, Precision p, std::ostream& out) {
  const auto results = run_acceptance(pot, p);
  bool ok = true;
  for (const auto& r : results) {
    out << format_check(r) << '\n';
    if (r.status == CheckStatus::Fail) ok = false;
  }
  return ok ? 0 : 1;
}

Precision resolve_precision(const RunConfig& c) {
  long bits = kDefaultPrecision.bits;
  if (const char* env = std::getenv("LOPT_PRECISION_BITS"); env && *env) {
    bits = parse_int(env);
  }
  if (c.precision_bits) bits = *c.precision_bits;
  if (bits < kMinPrecision) throw bad_argument("precision must be at least 64 bits");
  return Precision(bits);
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingQuartic:
    case ErrorKind::WrongSignQuartic:
    case ErrorKind::NoTurningPoint:
    case ErrorKind::ShapeViolation:
    case ErrorKind::InvalidConfig:
      return 2;
    case ErrorKind::NotMonotone:
      return 3;
    case ErrorKind::NonConvergence:
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::NoSignChange:
    case ErrorKind::OrderOverflow:
    case ErrorKind::ZeroValue:
    case ErrorKind::ZeroNormalizer:
    case ErrorKind::NegativeRadicand:
      return 4;
    default:
      return 5;
  }
}

Rational parse_number(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    try {
      return parse_rational(text);
    } catch (const Error&) {
      throw bad_argument("malformed number '" + text + "'");
    }
  }
  std::string mant = text;
  long exp10 = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    mant = text.substr(0, e);
    exp10 = parse_int(text.substr(e + 1)[0] == '+' ? text.substr(e + 2) : text.substr(e + 1));
  }
  std::string digits = mant;
  if (const auto dot = mant.find('.'); dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits == "" || digits == "-" || digits == "+") throw bad_argument("malformed number '" + text + "'");
  Rational q;
  try {
    q = parse_rational(digits);
  } catch (const Error&) {
    throw bad_argument("malformed number '" + text + "'");
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0) return q * scale;
  Rational r = q / Rational(scale);
  r.canonicalize();
  return r;
}

std::vector<Rational> Grid::points() const {
  std::vector<Rational> pts;
  for (int i = 0; i < steps; ++i) {
    Rational t = steps == 1 ? Rational(0) : Rational(i, steps - 1);
    t.canonicalize();
    Rational v = min + (max - min) * t;
    v.canonicalize();
    pts.push_back(v);
  }
  return pts;
}

Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  Grid g;
  if (parts.size() == 1) {
    g.min = g.max = parse_number(parts[0]);
    return g;
  }
  if (parts.size() != 3) throw bad_argument("grid must read min:max:steps, got '" + text + "'");
  g.min = parse_number(parts[0]);
  g.max = parse_number(parts[1]);
  g.steps = parse_int(parts[2]);
  if (g.steps < 1) throw bad_argument("grid needs at least one point");
  if (g.max < g.min) throw bad_argument("grid max below min");
  return g;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> v;
  for (const auto& s : split(text, ',')) v.push_back(parse_int(s));
  if (v.empty()) throw bad_argument("empty list");
  return v;
}

std::vector<Rational> parse_number_list(const std::string& text) {
  std::vector<Rational> v;
  for (const auto& s : split(text, ',')) v.push_back(parse_number(s));
  if (v.empty()) throw bad_argument("empty list");
  return v;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Large-order perturbation theory for even anharmonic oscillators", "lopt"};
  app.require_subcommand(1);
  app.add_option("--potential", c.potential_path, "potential JSON (default: Q^2/2 - Q^4)");
  app.add_option("--precision", c.precision_bits, "working precision in bits (>= 64)");
  app.add_option("-o,--out", c.output, "CSV output path (default: stdout)");

  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    // shared flags are accepted after the subcommand name too
    s->add_option("--potential", c.potential_path);
    s->add_option("--precision", c.precision_bits);
    s->add_option("-o,--out", c.output);
    return s;
  };
  CLI::App* series = sub("series", "exact orders and energies");
  series->add_option("--n", c.n);
  series->add_option("--k-max", c.k_max);
  CLI::App* curve_a = sub("curve-A", "A_k against A over a xi grid");
  CLI::App* curve_m = sub("curve-M", "M_k against M over a xi grid");
  for (CLI::App* s : {curve_a, curve_m}) {
    s->add_option("--n", c.n);
    s->add_option("--k", c.k_list, "orders, e.g. 10,20,30");
    s->add_option("--xi", c.xi_grid, "min:max:steps");
  }
  CLI::App* fixed_x = sub("fixed-x", "X_0k against the fixed-x limit over an x grid");
  fixed_x->add_option("--k", c.k_list);
  fixed_x->add_option("--x", c.x_grid, "min:max:steps");
  CLI::App* eigen = sub("eigen-ratio", "E_nk against its large-order form");
  eigen->add_option("--n", c.n);
  eigen->add_option("--k", c.k_list);
  CLI::App* matelem = sub("matelem", "<n2| x^m1 (-d/dx)^m2 |n1>_k against its large-order form");
  CLI::App* density = sub("density", "rho_k(x1, x2) against its saddle form");
  for (CLI::App* s : {matelem, density}) {
    s->add_option("--n1", c.n1);
    s->add_option("--n2", c.n2);
    s->add_option("--k", c.k_list);
  }
  matelem->add_option("--m1", c.m1);
  matelem->add_option("--m2", c.m2);
  density->add_option("--x1", c.x1);
  density->add_option("--x2", c.x2);
  CLI::App* traj = sub("trajectories", "trajectory samples with (kappa, eta) for each p_kappa");
  traj->add_option("--p-kappa", c.p_kappa, "comma-separated values");
  traj->add_option("--n", c.n, "level for the M column");
  CLI::App* verify = sub("verify", "acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 5;
  }

  try {
    const Precision p = resolve_precision(c);
    const Potential pot = c.potential_path.empty() ? Potential::quartic(p) : Potential::load(c.potential_path, p);
    std::ostringstream buf;
    int code = 0;
    if (verify->parsed()) {
      code = run_verify(pot, p, buf);
    } else {
      if (c.n < 0 || c.n1 < 0 || c.n2 < 0) throw bad_argument("levels must be non-negative");
      buf << header(pot, p) << '\n';
      Csv csv(buf);
      if (series->parsed()) run_series(c, pot, p, csv);
      if (curve_a->parsed()) run_curve(c, pot, p, csv, false);
      if (curve_m->parsed()) run_curve(c, pot, p, csv, true);
      if (fixed_x->parsed()) run_fixed_x(c, pot, p, csv);
      if (eigen->parsed()) run_eigen_ratio(c, pot, p, csv);
      if (matelem->parsed()) run_matelem(c, pot, p, csv);
      if (density->parsed()) run_density(c, pot, p, csv);
      if (traj->parsed()) run_trajectories(c, pot, p, csv);
    }
    if (c.output.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(c.output, std::ios::binary);
      if (!f) throw bad_argument("cannot write '" + c.output + "'");
      f << buf.str();
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

}  // namespace lopt::cli
