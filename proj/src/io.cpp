#include "gatefid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gatefid::io {

namespace {

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw FormatError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(where + "." + key + ": missing field");
  return *it;
}

Index dimension(const json& j, const std::string& key) {
  const json& v = member(j, key, "$");
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw FormatError(key + ": expected a positive integer");
  }
  return v.get<Index>();
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw FormatError(field + ": expected a number");
  return j.get<double>();
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Complex complex_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw FormatError(field + ": expected [re, im]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw FormatError(field + ": expected a non-empty list of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw FormatError(field + "[0]: expected a non-empty row");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) throw FormatError(row_field + ": ragged row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          complex_from_json(j[r][c], row_field + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Vector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw FormatError(field + ": expected a non-empty list");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

json channel_to_json(const KrausMap& map) {
  json kraus = json::array();
  for (const Matrix& k : map.kraus()) kraus.push_back(to_json(k));
  return {{"dim_in", map.dim_in()}, {"dim_out", map.dim_out()}, {"kraus", std::move(kraus)}};
}

json choi_to_json(const ChoiMatrix& choi) {
  return {{"dim_in", choi.dim_in}, {"dim_out", choi.dim_out}, {"choi", to_json(choi.matrix)}};
}

ChoiMatrix choi_from_json(const json& j) {
  ChoiMatrix c{dimension(j, "dim_in"), dimension(j, "dim_out"),
               matrix_from_json(member(j, "choi", "$"), "choi")};
  const Index n = c.dim_in * c.dim_out;
  if (c.matrix.rows() != n || c.matrix.cols() != n) {
    throw FormatError("choi: expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  return c;
}

KrausMap kraus_map_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("$: expected an object");
  if (!j.contains("kraus") && j.contains("choi")) return kraus_map_from_choi(choi_from_json(j));
  const Index din = dimension(j, "dim_in");
  const Index dout = dimension(j, "dim_out");
  const json& list = member(j, "kraus", "$");
  if (!list.is_array() || list.empty()) throw FormatError("kraus: expected a non-empty list of matrices");
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string field = "kraus[" + std::to_string(k) + "]";
    Matrix m = matrix_from_json(list[k], field);
    if (m.rows() != dout || m.cols() != din) {
      throw FormatError(field + ": expected " + std::to_string(dout) + "x" + std::to_string(din) +
                        ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    kraus.push_back(std::move(m));
  }
  return KrausMap(din, dout, std::move(kraus));
}

QuantumChannel channel_from_json(const json& j, double tol) {
  return QuantumChannel(kraus_map_from_json(j), tol);
}

json net_to_json(const StateNet& net) {
  json states = json::array();
  for (const PureState& s : net.states) states.push_back(to_json(s.amplitudes()));
  return {{"d", net.d},
          {"epsilon", net.epsilon},
          {"metric_id", net.metric_id},
          {"states", std::move(states)},
          {"coverage_confidence", net.coverage_confidence},
          {"seed", net.rng.seed},
          {"algorithm_id", net.rng.algorithm_id},
          {"validation_samples", net.validation_samples}};
}

StateNet net_from_json(const json& j) {
  StateNet net;
  net.d = dimension(j, "d");
  net.epsilon = number(member(j, "epsilon", "$"), "epsilon");
  const json& metric = member(j, "metric_id", "$");
  if (!metric.is_string() || metric.get<std::string>() != kEuclideanMetric) {
    throw FormatError("metric_id: expected \"euclidean\"");
  }
  net.coverage_confidence = number(member(j, "coverage_confidence", "$"), "coverage_confidence");
  const json& seed = member(j, "seed", "$");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw FormatError("seed: expected an integer");
  net.rng.seed = seed.get<std::uint64_t>();
  if (j.contains("algorithm_id")) net.rng.algorithm_id = j["algorithm_id"].get<std::string>();
  if (j.contains("validation_samples")) net.validation_samples = j["validation_samples"].get<std::int64_t>();
  const json& states = member(j, "states", "$");
  if (!states.is_array() || states.empty()) throw FormatError("states: expected a non-empty list");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string field = "states[" + std::to_string(i) + "]";
    Vector v = vector_from_json(states[i], field);
    if (v.size() != net.d) throw FormatError(field + ": expected " + std::to_string(net.d) + " amplitudes");
    try {
      net.states.emplace_back(std::move(v));
    } catch (const NumericalError&) {
      throw FormatError(field + ": not a normalized state");
    }
  }
  return net;
}

std::string inputs_hash(const json& inputs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : inputs.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot write file");
  out << text;
  if (!out) throw FormatError(path.string() + ": write failed");
}

}  // namespace gatefid::io
