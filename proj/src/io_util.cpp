#include "jset/io_util.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace jset {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) {
  if (z.imag() == 0) return format_double(z.real());
  std::string s = format_double(z.real());
  if (z.imag() >= 0 || std::isnan(z.imag())) s += "+";
  s += format_double(z.imag()) + "i";
  return s;
}

Complex parse_complex(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace((unsigned char)c)) s += c;
  if (s.empty()) throw DomainError("empty complex literal");
  // forms: a | bi | a+bi | a-bi  (also accepts leading sign on a)
  auto parse_num = [](const std::string& t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw DomainError("bad numeric literal: " + t);
    return v;
  };
  if (s.back() == 'i' || s.back() == 'I') {
    std::string body = s.substr(0, s.size() - 1);
    // split at the last +/- that is not an exponent sign and not leading
    for (size_t i = body.size(); i-- > 1;) {
      char c = body[i];
      if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        return Complex(parse_num(body.substr(0, i)), parse_num(body.substr(i)));
      }
    }
    return Complex(0.0, parse_num(body));
  }
  return Complex(parse_num(s), 0.0);
}

ExternalAngle parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return ExternalAngle::make(std::stoll(s), 1);
  return ExternalAngle::make(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

Json series_to_json(const TruncatedSeries& s, Complex lambda) {
  Json j;
  j["lambda"] = complex_to_json(lambda);
  j["lowest_index"] = s.lowest_index();
  j["order"] = s.order();
  Json coeffs = Json::array();
  for (int k = s.lowest_index(); k <= s.order(); k++) coeffs.push_back(complex_to_json(s.at(k)));
  j["coeffs"] = std::move(coeffs);
  return j;
}

TruncatedSeries series_from_json(const Json& j) {
  int lowest = j.at("lowest_index").get<int>();
  std::vector<Complex> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(complex_from_json(c));
  TruncatedSeries s(lowest, std::move(coeffs));
  if (s.order() != j.at("order").get<int>())
    throw DomainError("series_from_json: order does not match coefficient count");
  return s;
}

Json model_to_json(const TransseriesModel& m) {
  Json j;
  j["lambda"] = complex_to_json(m.param.lambda);
  j["angle"] = {{"p", m.orbit.angle.p}, {"q", m.orbit.angle.q}};
  j["L"] = complex_to_json(m.orbit.landing());
  j["N"] = m.orbit.N;
  j["M"] = m.orbit.M;
  j["w"] = complex_to_json(m.orbit.w);
  j["b"] = complex_to_json(m.orbit.b);
  Json g = Json::array(), gi = Json::array();
  for (const auto& c : m.g_coeffs) g.push_back(complex_to_json(c));
  for (const auto& c : m.ginv_coeffs) gi.push_back(complex_to_json(c));
  j["g"] = std::move(g);
  j["ginv"] = std::move(gi);
  Json om = Json::array();
  for (int k = -m.k_max; k <= m.k_max; k++)
    om.push_back({{"k", k}, {"c", complex_to_json(m.c(k))}});
  j["omega"] = std::move(om);
  j["conv_radius_est"] = m.conv_radius_est;
  j["s0"] = m.s0;
  j["residuals"] = {{"conjugacy", m.residual_conjugacy},
                    {"omega_periodicity", m.residual_periodicity},
                    {"ginv_identity", m.residual_ginv}};
  // branch conventions are fixed choices; recorded for downstream readers
  j["conventions"] = {{"normalization", "lim z*phi(z) = -1/lambda"},
                      {"branches", "principal log for s^b and ln s, continuous unwrapping"}};
  return j;
}

Json beta_to_json(const BetaEResult& r) {
  Json j;
  j["beta_E"] = r.beta_E;
  j["winding"] = r.winding;
  j["bE_imag_mod_winding"] = r.im_mod_winding;
  Json per = Json::array();
  for (double v : r.per_rho) per.push_back(v);
  j["per_rho"] = std::move(per);
  j["extrapolation_span"] = r.extrapolation_span;
  return j;
}

Json report_to_json(const DimensionReport& r) {
  Json j;
  j["beta_E"] = r.beta_E;
  j["winding"] = r.winding;
  j["bE_imag_mod_winding"] = r.bE_imag_mod_winding;
  j["lower_bound"] = r.lower_bound;
  j["ruelle_D"] = r.ruelle_D;
  j["ruelle_period"] = r.ruelle_period;
  j["legendre"] = r.legendre;
  j["quadrature_stability"] = r.quadrature_stability;
  return j;
}

Json distribution_to_json(const ExponentDistribution& d) {
  Json j;
  j["n"] = d.n;
  j["beta_M"] = d.beta_M;
  Json betas = Json::array();
  for (double b : d.betas) betas.push_back(b);
  j["betas"] = std::move(betas);
  return j;
}

namespace {

void write_metadata_comments(std::ostream& os, const std::string& metadata) {
  std::istringstream in(metadata);
  std::string line;
  while (std::getline(in, line)) os << "# " << line << "\n";
}

}  // namespace

void write_polyline_csv(const std::string& path, const Polyline& line,
                        const std::string& metadata) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path);
  write_metadata_comments(os, metadata);
  os << "index,re,im\n";
  for (size_t i = 0; i < line.points.size(); i++)
    os << i << "," << format_double(line.points[i].real()) << ","
       << format_double(line.points[i].imag()) << "\n";
}

void write_cloud_csv(const std::string& path, const PointCloud& cloud,
                     const std::string& metadata) {
  Polyline as_line;
  as_line.points = cloud.points;
  write_polyline_csv(path, as_line, metadata);
}

void write_distribution_csv(const std::string& path, const ExponentDistribution& d,
                            const std::string& metadata) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path);
  write_metadata_comments(os, metadata);
  os << "beta,mu_n,F_n,Phi_n\n";
  double prev = std::nan("");
  for (double b : d.betas) {
    if (b == prev) continue;  // one row per distinct beta
    prev = b;
    os << format_double(b) << "," << format_double(d.mu(b)) << "," << format_double(d.F(b))
       << "," << format_double(d.Phi(b)) << "\n";
  }
}

void write_pnm(const std::string& path, const RasterImage& img, const std::string& metadata) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path);
  os << (img.channels == 3 ? "P6" : "P5") << "\n";
  std::istringstream in(metadata);
  std::string line;
  while (std::getline(in, line)) os << "# " << line << "\n";
  os << img.width << " " << img.height << "\n255\n";
  os.write((const char*)img.pixels.data(), (std::streamsize)img.pixels.size());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path);
  os << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace jset
