#include "lopt/potential.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "lopt/errors.hpp"
#include "lopt/roots.hpp"

namespace lopt {

namespace {

constexpr int kShapeGridPoints = 256;

// w(y) = 2V/Q^2 as a polynomial in y = Q^2: 1 + sum 2 a_{2p} y^{p-1}.
BigFloat reduced_ratio_in_y(const std::map<int, Rational>& coeffs, const BigFloat& y) {
  BigFloat w(1, y.precision());
  for (const auto& [deg, a] : coeffs) {
    w += BigFloat(a, y.precision()) * pow(y, deg / 2 - 1) * 2;
  }
  return w;
}

Rational rational_pow(const Rational& q, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= q;
  return r;
}

}  // namespace

Potential Potential::validate(const std::map<int, Rational>& raw, Precision p) {
  std::map<int, Rational> coeffs;
  for (const auto& [deg, a] : raw) {
    if (deg < 4 || deg % 2 != 0) {
      throw Error(ErrorKind::InvalidConfig,
                  "anharmonic degrees must be even and >= 4, got " + std::to_string(deg));
    }
    if (a != 0) coeffs.emplace(deg, a);
  }
  const auto quartic = coeffs.find(4);
  if (quartic == coeffs.end()) throw Error(ErrorKind::MissingQuartic, "a4 is absent or zero");
  if (quartic->second > 0) throw Error(ErrorKind::WrongSignQuartic, "a4 = " + to_string(quartic->second) + " > 0");

  // Scan y = Q^2 geometrically for the first sign change of 2V/Q^2.
  const Precision wp = p + 32;
  BigFloat y_prev(0, wp);
  BigFloat y = BigFloat(1e-8, wp);
  const BigFloat ratio = BigFloat(21, wp) / 20;
  const BigFloat bound(1e12, wp);
  bool bracketed = false;
  while (y <= bound) {
    if (reduced_ratio_in_y(coeffs, y).sign() <= 0) {
      bracketed = true;
      break;
    }
    y_prev = y;
    y *= ratio;
  }
  if (!bracketed) throw Error(ErrorKind::NoTurningPoint, "V has no positive root below Q = 1e6");

  const auto w_of_q = [&coeffs](const BigFloat& q) { return reduced_ratio_in_y(coeffs, q * q); };
  const BigFloat q_lo = sqrt(y_prev);
  const BigFloat q_hi = sqrt(y);
  const BigFloat tol = ldexp(q_hi, -(wp.bits - 8));
  const BigFloat q_plus = find_root_bracketed(w_of_q, q_lo, q_hi, tol).at(p);

  Potential pot(std::move(coeffs), q_plus);
  for (int i = 1; i <= kShapeGridPoints; ++i) {
    const BigFloat q = q_plus * i / (kShapeGridPoints + 1);
    if (pot.v(q).sign() <= 0) {
      throw Error(ErrorKind::ShapeViolation, "V <= 0 at Q = " + q.str(12) + " inside (0, Q+)");
    }
  }
  // A tangential root (V'(Q+) = 0) means the trajectory never turns.
  const BigFloat slope = pot.dv(q_plus);
  if (!(slope < 0) || abs(slope) <= ldexp(abs(q_plus), -(p.bits / 2))) {
    throw Error(ErrorKind::ShapeViolation, "V'(Q+) = " + slope.str(6) + " is not strictly negative");
  }
  return pot;
}

Potential Potential::quartic(Precision p) { return validate({{4, Rational(-1)}}, p); }

Potential Potential::from_json(const std::string& text, Precision p) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("potential config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::InvalidConfig, "potential config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "coeffs") throw Error(ErrorKind::InvalidConfig, "unknown key '" + key + "'");
  }
  if (!doc.contains("coeffs") || !doc["coeffs"].is_object()) {
    throw Error(ErrorKind::InvalidConfig, "'coeffs' object is required");
  }
  std::map<int, Rational> raw;
  for (const auto& [key, value] : doc["coeffs"].items()) {
    int degree = 0;
    try {
      std::size_t used = 0;
      degree = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "coefficient key '" + key + "' is not an integer degree");
    }
    Rational a;
    if (value.is_string()) {
      a = parse_rational(value.get<std::string>());
    } else if (value.is_number_integer()) {
      a = Rational(std::to_string(value.get<long long>()), 10);
    } else {
      throw Error(ErrorKind::InvalidConfig, "coefficient for degree " + key + " must be \"p/q\" or an integer");
    }
    raw[degree] = a;
  }
  return validate(raw, p);
}

Potential Potential::load(const std::string& path, Precision p) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open potential config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), p);
}

PotentialValues Potential::values(const BigFloat& q) const {
  const Precision p = q.precision();
  const BigFloat q2 = q * q;
  BigFloat v = q2 / 2;
  BigFloat dv = q;
  BigFloat rate(0, p);
  for (const auto& [deg, a] : coeffs_) {
    const BigFloat ab(a, p);
    const BigFloat qd1 = pow(q, deg - 1);
    const BigFloat term = ab * qd1 * q;
    v += term;
    dv += ab * qd1 * deg;
    rate += term * (1 - deg / 2);
  }
  return {std::move(v), std::move(dv), std::move(rate)};
}

BigFloat Potential::v(const BigFloat& q) const {
  BigFloat v = q * q / 2;
  for (const auto& [deg, a] : coeffs_) v += BigFloat(a, q.precision()) * pow(q, deg);
  return v;
}

BigFloat Potential::dv(const BigFloat& q) const {
  BigFloat dv = q;
  for (const auto& [deg, a] : coeffs_) dv += BigFloat(a, q.precision()) * pow(q, deg - 1) * deg;
  return dv;
}

BigFloat Potential::reduced_excess(const BigFloat& q) const {
  BigFloat h(0, q.precision());
  for (const auto& [deg, a] : coeffs_) h += BigFloat(a, q.precision()) * pow(q, deg - 3) * 2;
  return h;
}

Rational Potential::v_exact(const Rational& q) const {
  Rational v = q * q / 2;
  for (const auto& [deg, a] : coeffs_) v += a * rational_pow(q, deg);
  return v;
}

Rational Potential::dv_exact(const Rational& q) const {
  Rational dv = q;
  for (const auto& [deg, a] : coeffs_) dv += a * deg * rational_pow(q, deg - 1);
  return dv;
}

Rational Potential::lambda_rate_exact(const Rational& q) const {
  Rational r = 0;
  for (const auto& [deg, a] : coeffs_) r += a * (1 - deg / 2) * rational_pow(q, deg);
  return r;
}

std::string Potential::describe() const {
  std::string s;
  for (const auto& [deg, a] : coeffs_) {
    if (!s.empty()) s += ";";
    s += "a" + std::to_string(deg) + "=" + to_string(a);
  }
  return s;
}

std::string Potential::to_json() const {
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [deg, a] : coeffs_) c[std::to_string(deg)] = to_string(a);
  return nlohmann::json{{"coeffs", c}}.dump();
}

}  // namespace lopt
