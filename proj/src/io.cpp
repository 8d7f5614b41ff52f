#include "oneshot/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oneshot {

namespace {

using json = nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<int> int_list(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  std::vector<int> out;
  for (const auto& x : a) {
    if (!x.is_number_integer() || x.get<long long>() < 1 || x.get<long long>() > 4096)
      throw ParseError(std::string("'") + key + "' entries must be integers in [1, 4096]");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<std::string> label_list(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : a) {
    if (!x.is_string()) throw ParseError(std::string("'") + key + "' entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<std::string> default_labels(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i + 1));
  return out;
}

long long product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) {
    p *= d;
    if (p > 4096) throw ParseError("total dimension exceeds 4096");
  }
  return p;
}

Matrix read_entries(const json& a, long long rows, long long cols, const std::string& what) {
  if (!a.is_array() || static_cast<long long>(a.size()) != rows * cols)
    throw ParseError(what + ": expected " + std::to_string(rows * cols) + " entries");
  Matrix m(rows, cols);
  for (long long i = 0; i < rows * cols; ++i) {
    const json& e = a[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError(what + ": each entry must be [re, im]");
    m(i / cols, i % cols) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

json write_entries(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back({m(i, j).real(), m(i, j).imag()});
  return a;
}

RegisterShape shape_from(std::vector<std::string> labels, std::vector<int> dims) {
  if (labels.size() != dims.size()) throw ParseError("labels and dims differ in length");
  try {
    return RegisterShape(std::move(labels), std::move(dims));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid registers: ") + e.what());
  }
}

}  // namespace

HermitianOperator operator_from_json(const std::string& text) {
  const json j = parse(text);
  const std::vector<int> dims = int_list(j, "dims");
  const long long d = product(dims);
  RegisterShape shape = shape_from(label_list(j, "labels"), dims);
  Matrix m = read_entries(field(j, "entries"), d, d, "entries");
  try {
    return HermitianOperator(std::move(shape), m);
  } catch (const DomainError& e) {
    throw ParseError(std::string("entries: ") + e.what());
  }
}

std::string operator_to_json(const HermitianOperator& op) {
  json j;
  j["labels"] = op.shape().labels();
  j["dims"] = op.shape().dims();
  j["entries"] = write_entries(op.matrix());
  return j.dump();
}

Channel channel_from_json(const std::string& text) {
  const json j = parse(text);
  const std::vector<int> in_dims = int_list(j, "in_dims"), out_dims = int_list(j, "out_dims");
  const long long din = product(in_dims), dout = product(out_dims);
  RegisterShape in = shape_from(j.contains("in_labels") ? label_list(j, "in_labels")
                                                        : default_labels("A", in_dims.size()),
                                in_dims);
  RegisterShape out = shape_from(j.contains("out_labels") ? label_list(j, "out_labels")
                                                          : default_labels("B", out_dims.size()),
                                 out_dims);
  const json& ks = field(j, "kraus");
  if (!ks.is_array() || ks.empty()) throw ParseError("'kraus' must be a non-empty array");
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < ks.size(); ++i)
    kraus.push_back(read_entries(ks[i], dout, din, "kraus[" + std::to_string(i) + "]"));
  try {
    return Channel(std::move(kraus), std::move(in), std::move(out));
  } catch (const DomainError& e) {
    throw ParseError(std::string("kraus: ") + e.what());
  }
}

std::string channel_to_json(const Channel& ch) {
  json j;
  j["in_labels"] = ch.in_shape().labels();
  j["in_dims"] = ch.in_shape().dims();
  j["out_labels"] = ch.out_shape().labels();
  j["out_dims"] = ch.out_shape().dims();
  json ks = json::array();
  for (const auto& k : ch.kraus()) ks.push_back(write_entries(k));
  j["kraus"] = ks;
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

HermitianOperator load_operator(const std::string& path) {
  return operator_from_json(read_text_file(path));
}

Channel load_channel(const std::string& path) { return channel_from_json(read_text_file(path)); }

}  // namespace oneshot
