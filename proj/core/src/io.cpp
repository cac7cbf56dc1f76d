#include "canonica/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace canonica {
namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(std::string("bad JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw input_error(std::string("missing field \"") + key + "\"");
  return *it;
}

double real_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number())
    throw input_error(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

long int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer())
    throw input_error(std::string("field \"") + key +
                      "\" must be an integer");
  return v.get<long>();
}

std::vector<double> real_array(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array())
    throw input_error(std::string("field \"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number())
      throw input_error(std::string("field \"") + key +
                        "\" must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) throw input_error("cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void append_real_array(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  out += ']';
}

Grid grid_from_json(const json& j) {
  Grid g;
  g.t0 = real_field(j, "t0");
  g.dt = real_field(j, "dt");
  const long n = int_field(j, "n");
  if (n < 0) throw input_error("grid: n must be >= 0");
  g.n = static_cast<std::size_t>(n);
  if (!(g.dt > 0.0)) throw input_error("grid: dt must be > 0");
  return g;
}

WindowSpec window_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw input_error("window: kind must be a string");
  const std::string k = kind.get<std::string>();
  WindowSpec w;
  if (k == "gaussian") {
    w.kind = WindowSpec::Kind::Gaussian;
    w.gamma = real_field(j, "gamma");
  } else if (k == "hermite") {
    w.kind = WindowSpec::Kind::Hermite;
    w.k = static_cast<int>(int_field(j, "k"));
  } else if (k == "poly_gaussian") {
    w.kind = WindowSpec::Kind::PolyGaussian;
    w.gamma = real_field(j, "gamma");
    w.coeffs = real_array(j, "coeffs");
  } else {
    throw input_error("window: unknown kind \"" + k + "\"");
  }
  return w;
}

LctParams params_from_json(const json& j) {
  LctParams A;
  A.a = real_field(j, "a");
  A.b = real_field(j, "b");
  A.c = real_field(j, "c");
  A.d = real_field(j, "d");
  return A;
}

SamplingSet sampling_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw input_error("sampling: kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "sqrt")
    return sqrt_lattice(real_field(j, "tau"), real_field(j, "v"),
                        static_cast<int>(int_field(j, "K")));
  if (k == "lines")
    return counterexample_lines(real_field(j, "b"), real_field(j, "u"),
                                static_cast<int>(int_field(j, "x_count")),
                                grid_from_json(field(j, "mu_grid")));
  if (k == "bandlimited")
    return bandlimited_lattice(real_field(j, "B"), real_field(j, "m"),
                               real_field(j, "b"),
                               static_cast<int>(int_field(j, "x_max")),
                               static_cast<int>(int_field(j, "mu_count")));
  if (k == "explicit") {
    const json& pts = field(j, "points");
    if (!pts.is_array()) throw input_error("sampling: points must be an array");
    std::vector<TfPoint> points;
    points.reserve(pts.size());
    for (const auto& p : pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number())
        throw input_error("sampling: each point must be [x, mu]");
      points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return explicit_set(std::move(points));
  }
  throw input_error("sampling: unknown kind \"" + k + "\"");
}

std::string sampling_to_json(const SamplingSet& s) {
  std::string out;
  switch (s.kind) {
    case SamplingSet::Kind::Sqrt:
      out = "{\"kind\":\"sqrt\",\"tau\":" + fmt(s.tau) + ",\"v\":" +
            fmt(s.v) + ",\"K\":" + std::to_string(s.K) + "}";
      break;
    case SamplingSet::Kind::Bandlimited:
      out = "{\"kind\":\"bandlimited\",\"B\":" + fmt(s.band) + ",\"m\":" +
            fmt(s.m) + ",\"b\":" + fmt(s.b) + ",\"x_max\":" +
            std::to_string(s.x_max) + ",\"mu_count\":" +
            std::to_string(s.mu_count) + "}";
      break;
    case SamplingSet::Kind::Lines:
    case SamplingSet::Kind::Explicit: {
      out = "{\"kind\":\"explicit\",\"points\":[";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) out += ',';
        out += '[' + fmt(s.points[i].x) + ',' + fmt(s.points[i].mu) + ']';
      }
      out += "]}";
      break;
    }
  }
  return out;
}

}  // namespace

Grid parse_grid(const std::string& text) {
  return grid_from_json(parse_json(text));
}

Signal parse_signal(const std::string& text) {
  const json j = parse_json(text);
  Signal f;
  f.grid = grid_from_json(field(j, "grid"));
  const std::vector<double> re = real_array(j, "re");
  const std::vector<double> im = real_array(j, "im");
  if (re.size() != f.grid.n || im.size() != f.grid.n)
    throw input_error("signal: re/im lengths must equal grid.n");
  f.v.resize(f.grid.n);
  for (std::size_t k = 0; k < f.grid.n; ++k) f.v[k] = cdouble(re[k], im[k]);
  return f;
}

LctParams parse_params(const std::string& text) {
  return params_from_json(parse_json(text));
}

WindowSpec parse_window(const std::string& text) {
  return window_from_json(parse_json(text));
}

SamplingSet parse_sampling(const std::string& text) {
  return sampling_from_json(parse_json(text));
}

MeasurementSet parse_measurement(const std::string& text) {
  const json j = parse_json(text);
  MeasurementSet m;
  m.params = params_from_json(field(j, "params"));
  m.window = window_from_json(field(j, "window"));
  m.sampling = sampling_from_json(field(j, "sampling"));
  const std::vector<double> mags = real_array(j, "magnitudes");
  if (mags.size() != m.sampling.points.size())
    throw input_error(
        "measurement: magnitudes length must equal sampling size");
  for (double v : mags)
    if (!(v >= 0.0))
      throw input_error("measurement: magnitudes must be >= 0");
  m.magnitudes = mags;
  return m;
}

Grid read_grid(const std::string& path) {
  return parse_grid(read_text_file(path));
}
Signal read_signal(const std::string& path) {
  return parse_signal(read_text_file(path));
}
LctParams read_params(const std::string& path) {
  return parse_params(read_text_file(path));
}
WindowSpec read_window(const std::string& path) {
  return parse_window(read_text_file(path));
}
SamplingSet read_sampling(const std::string& path) {
  return parse_sampling(read_text_file(path));
}
MeasurementSet read_measurement(const std::string& path) {
  return parse_measurement(read_text_file(path));
}

std::string format_real(double x) { return fmt(x); }

std::string format_grid(const Grid& g) {
  return "{\"t0\":" + fmt(g.t0) + ",\"dt\":" + fmt(g.dt) + ",\"n\":" +
         std::to_string(g.n) + "}";
}

std::string format_signal(const Signal& f) {
  require_consistent(f);
  std::vector<double> re(f.grid.n), im(f.grid.n);
  for (std::size_t k = 0; k < f.grid.n; ++k) {
    re[k] = f.v[k].real();
    im[k] = f.v[k].imag();
  }
  std::string out = "{\"grid\":" + format_grid(f.grid) + ",\"re\":";
  append_real_array(out, re);
  out += ",\"im\":";
  append_real_array(out, im);
  out += "}";
  return out;
}

std::string format_params(const LctParams& A) {
  return "{\"a\":" + fmt(A.a) + ",\"b\":" + fmt(A.b) + ",\"c\":" + fmt(A.c) +
         ",\"d\":" + fmt(A.d) + "}";
}

std::string format_window(const WindowSpec& w) {
  switch (w.kind) {
    case WindowSpec::Kind::Gaussian:
      return "{\"kind\":\"gaussian\",\"gamma\":" + fmt(w.gamma) + "}";
    case WindowSpec::Kind::Hermite:
      return "{\"kind\":\"hermite\",\"k\":" + std::to_string(w.k) + "}";
    case WindowSpec::Kind::PolyGaussian: {
      std::string out = "{\"kind\":\"poly_gaussian\",\"coeffs\":";
      append_real_array(out, w.coeffs);
      out += ",\"gamma\":" + fmt(w.gamma) + "}";
      return out;
    }
  }
  throw input_error("window: invalid kind");
}

std::string format_sampling(const SamplingSet& s) { return sampling_to_json(s); }

std::string format_measurement(const MeasurementSet& m) {
  std::string out = "{\"params\":" + format_params(m.params) +
                    ",\"window\":" + format_window(m.window) +
                    ",\"sampling\":" + format_sampling(m.sampling) +
                    ",\"magnitudes\":";
  append_real_array(out, m.magnitudes);
  out += "}";
  return out;
}

std::string format_points_csv(const SamplingSet& s) {
  std::string out = "x,mu\n";
  for (const TfPoint& p : s.points)
    out += fmt(p.x) + "," + fmt(p.mu) + "\n";
  return out;
}

std::string format_spectrogram_csv(const SpectrogramSamples& s) {
  if (s.points.size() != s.values.size())
    throw input_error("spectrogram: points/values length mismatch");
  std::string out = "x,mu,re,im,mag\n";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    out += fmt(s.points[i].x) + "," + fmt(s.points[i].mu) + "," +
           fmt(s.values[i].real()) + "," + fmt(s.values[i].imag()) + "," +
           fmt(std::abs(s.values[i])) + "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw input_error("cannot write file: " + path);
  out << text;
  if (!out.flush()) throw input_error("write failed: " + path);
}

}  // namespace canonica
