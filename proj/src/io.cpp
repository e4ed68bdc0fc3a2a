#include "rebound/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace rebound {

std::string format_number(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (std::isnan(v))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const Json &j) {
  if (j.is_number())
    return j.get<double>();
  if (!j.is_string())
    throw ParseError("expected a number, got " + std::string(j.type_name()));
  const auto &s = j.get_ref<const std::string &>();
  if (s == "inf" || s == "+inf")
    return std::numeric_limits<double>::infinity();
  if (s == "-inf")
    return -std::numeric_limits<double>::infinity();
  if (s.empty())
    throw ParseError("empty number string");
  errno = 0;
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError("'" + s + "' is not a finite decimal number");
  return v;
}

Json number_list(const std::vector<double> &v) {
  Json out = Json::array();
  for (double x : v)
    out.push_back(format_number(x));
  return out;
}

Json matrix_to_json(const Matrix &m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({format_number(m(r, c).real()), format_number(m(r, c).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json &j) {
  if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty())
    throw ParseError("matrix must be a non-empty array of non-empty rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError("matrix rows have different lengths");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto &e = row[static_cast<std::size_t>(c)];
      double re = 0.0, im = 0.0;
      if (e.is_array()) {
        if (e.size() != 2)
          throw ParseError("complex entry must be a [re, im] pair");
        re = parse_number(e[0]);
        im = parse_number(e[1]);
      } else {
        re = parse_number(e);
      }
      if (!std::isfinite(re) || !std::isfinite(im))
        throw ParseError("non-finite matrix entry");
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

Json matrix_list_to_json(const std::vector<Matrix> &ms) {
  Json out = Json::array();
  for (const auto &m : ms)
    out.push_back(matrix_to_json(m));
  return out;
}

std::vector<Matrix> matrix_list_from_json(const Json &j) {
  if (!j.is_array())
    throw ParseError("expected a list of matrices");
  std::vector<Matrix> out;
  for (const auto &m : j)
    out.push_back(matrix_from_json(m));
  return out;
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string &path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

std::string document_kind(const Json &j) {
  if (!j.is_object())
    throw ParseError("document must be a JSON object");
  if (j.contains("kind")) {
    if (!j["kind"].is_string())
      throw ParseError("\"kind\" must be a string");
    return j["kind"].get<std::string>();
  }
  if (j.contains("channels"))
    return "collection";
  throw ParseError("document has no \"kind\" field");
}

namespace {

const Json &field(const Json &j, const char *name) {
  if (!j.is_object() || !j.contains(name))
    throw ParseError(std::string("missing field \"") + name + "\"");
  return j[name];
}

Eigen::Index dim_field(const Json &j, const char *name) {
  const auto &f = field(j, name);
  if (!f.is_number_integer() || f.get<long long>() < 1)
    throw ParseError(std::string("\"") + name + "\" must be a positive integer");
  return static_cast<Eigen::Index>(f.get<long long>());
}

std::string string_field(const Json &j, const char *name) {
  const auto &f = field(j, name);
  if (!f.is_string())
    throw ParseError(std::string("\"") + name + "\" must be a string");
  return f.get<std::string>();
}

struct RawKraus {
  Eigen::Index in_dim;
  Eigen::Index out_dim;
  std::vector<Matrix> kraus;
};

RawKraus raw_kraus_from_json(const Json &j) {
  return {dim_field(j, "in_dim"), dim_field(j, "out_dim"), matrix_list_from_json(field(j, "kraus"))};
}

Json kraus_to_json(const QuantumChannel &ch) {
  Json j;
  j["in_dim"] = ch.in_dim();
  j["out_dim"] = ch.out_dim();
  j["kraus"] = matrix_list_to_json(ch.kraus());
  return j;
}

} // namespace

RawCollection raw_collection_from_json(const Json &j) {
  if (!j.is_object())
    throw ParseError("collection must be a JSON object");
  if (j.contains("version") && (!j["version"].is_number_integer() || j["version"].get<int>() != 1))
    throw ParseError("unsupported collection version");
  RawCollection raw{dim_field(j, "in_dim"), dim_field(j, "out_dim"), {}};
  const auto &channels = field(j, "channels");
  if (!channels.is_array())
    throw ParseError("\"channels\" must be an array");
  for (const auto &c : channels)
    raw.channels.push_back({string_field(c, "label"), matrix_list_from_json(field(c, "kraus"))});
  return raw;
}

ChannelCollection collection_from_json(const Json &j) {
  const RawCollection raw = raw_collection_from_json(j);
  std::vector<std::string> labels;
  std::vector<QuantumChannel> channels;
  for (const auto &c : raw.channels) {
    labels.push_back(c.label);
    channels.emplace_back(Register{"B'", raw.in_dim}, Register{"B", raw.out_dim}, c.kraus);
  }
  return ChannelCollection(std::move(labels), std::move(channels));
}

Json collection_to_json(const ChannelCollection &coll) {
  Json j;
  j["version"] = 1;
  j["in_dim"] = coll.in_reg().dim;
  j["out_dim"] = coll.out_reg().dim;
  Json channels = Json::array();
  for (std::size_t x = 0; x < coll.size(); ++x) {
    Json c;
    c["label"] = coll.alphabet()[x];
    c["kraus"] = matrix_list_to_json(coll.channels()[x].kraus());
    channels.push_back(std::move(c));
  }
  j["channels"] = std::move(channels);
  return j;
}

GroupRepresentation group_from_json(const Json &j) {
  auto in = matrix_list_from_json(field(j, "unitaries_in"));
  auto out = j.contains("unitaries_out") ? matrix_list_from_json(j["unitaries_out"]) : in;
  std::optional<MultiplicationTable> table;
  if (j.contains("table")) {
    try {
      table = j["table"].get<MultiplicationTable>();
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("bad multiplication table: ") + e.what());
    }
  }
  return GroupRepresentation(std::move(in), std::move(out), std::move(table));
}

Json group_to_json(const GroupRepresentation &rep) {
  Json j;
  j["kind"] = "group";
  j["unitaries_in"] = matrix_list_to_json(rep.in_unitaries());
  j["unitaries_out"] = matrix_list_to_json(rep.out_unitaries());
  if (rep.table())
    j["table"] = *rep.table();
  return j;
}

DensityOperator state_from_json(const Json &j) {
  const auto &dims = field(j, "dims");
  if (!dims.is_array() || dims.empty())
    throw ParseError("\"dims\" must be a non-empty array");
  std::vector<std::string> names;
  if (j.contains("names")) {
    if (!j["names"].is_array() || j["names"].size() != dims.size())
      throw ParseError("\"names\" must list one name per factor");
    for (const auto &n : j["names"])
      names.push_back(n.get<std::string>());
  } else {
    for (std::size_t k = 0; k < dims.size(); ++k)
      names.push_back("A" + std::to_string(k));
  }
  Registers regs;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!dims[k].is_number_integer() || dims[k].get<long long>() < 1)
      throw ParseError("\"dims\" entries must be positive integers");
    regs.push_back({names[k], static_cast<Eigen::Index>(dims[k].get<long long>())});
  }
  return DensityOperator(std::move(regs), matrix_from_json(field(j, "matrix")));
}

Json state_to_json(const DensityOperator &rho) {
  Json j;
  j["kind"] = "state";
  Json dims = Json::array(), names = Json::array();
  for (const auto &r : rho.registers()) {
    dims.push_back(r.dim);
    names.push_back(r.name);
  }
  j["dims"] = std::move(dims);
  j["names"] = std::move(names);
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

Codebook codebook_from_json(const Json &j) {
  const auto &words = field(j, "words");
  if (!words.is_object())
    throw ParseError("\"words\" must be an object mapping messages to label lists");
  std::vector<std::pair<std::string, Codebook::Word>> out;
  for (const auto &[m, w] : words.items()) {
    if (!w.is_array())
      throw ParseError("word for '" + m + "' must be an array of labels");
    Codebook::Word word;
    for (const auto &x : w) {
      if (!x.is_string())
        throw ParseError("word for '" + m + "' must contain label strings");
      word.push_back(x.get<std::string>());
    }
    out.emplace_back(m, std::move(word));
  }
  return Codebook(std::move(out));
}

Json codebook_to_json(const Codebook &code) {
  Json j;
  j["kind"] = "codebook";
  Json words = Json::object();
  for (const auto &[m, w] : code.words())
    words[m] = w;
  j["words"] = std::move(words);
  return j;
}

ReboundProtocol protocol_from_json(const Json &j, Eigen::Index in_dim, Eigen::Index out_dim) {
  if (j.contains("in_dim"))
    in_dim = dim_field(j, "in_dim");
  if (j.contains("out_dim"))
    out_dim = dim_field(j, "out_dim");
  if (in_dim < 1 || out_dim < 1)
    throw ParseError("protocol needs \"in_dim\" and \"out_dim\" (or a collection)");
  const auto &n_field = field(j, "n");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1)
    throw ParseError("\"n\" must be a positive integer");
  const auto n = static_cast<std::size_t>(n_field.get<long long>());

  Matrix initial = matrix_from_json(field(j, "initial_state"));
  if (initial.rows() % in_dim != 0)
    throw DimensionMismatch("initial state dimension is not a multiple of dim B'");
  const Eigen::Index r1 = initial.rows() / in_dim;
  DensityOperator rho({{"R1", r1}, {"B'1", in_dim}}, std::move(initial));

  const Json adaptive_json = j.contains("adaptive") ? j["adaptive"] : Json::array();
  if (!adaptive_json.is_array() || adaptive_json.size() + 1 != n)
    throw ParseError("\"adaptive\" must list n - 1 Kraus lists");
  std::vector<QuantumChannel> adaptive;
  Eigen::Index memory = rho.registers().front().dim;
  for (std::size_t i = 0; i < adaptive_json.size(); ++i) {
    auto kraus = matrix_list_from_json(adaptive_json[i]);
    if (kraus.empty())
      throw ParseError("adaptive channel " + std::to_string(i + 1) + " has no Kraus operators");
    const std::string tag = std::to_string(i + 1), next = std::to_string(i + 2);
    const Eigen::Index d_out = kraus.front().rows();
    adaptive.emplace_back(Register{"R" + tag + "B" + tag, memory * out_dim},
                          Register{"R" + next + "B'" + next, d_out}, std::move(kraus));
    memory = d_out / in_dim;
  }
  return ReboundProtocol(std::move(rho), std::move(adaptive), matrix_list_from_json(field(j, "povm")),
                         out_dim);
}

Json protocol_to_json(const ReboundProtocol &proto) {
  Json j;
  j["kind"] = "protocol";
  j["n"] = proto.n();
  j["in_dim"] = proto.in_dim();
  j["out_dim"] = proto.out_dim();
  j["initial_state"] = matrix_to_json(proto.initial().matrix());
  Json adaptive = Json::array();
  for (const auto &a : proto.adaptive())
    adaptive.push_back(matrix_list_to_json(a.kraus()));
  j["adaptive"] = std::move(adaptive);
  j["povm"] = matrix_list_to_json(proto.povm());
  return j;
}

EnvParametrization env_from_json(const Json &j) {
  const Eigen::Index de = dim_field(j, "env_dim");
  const auto raw = raw_kraus_from_json(field(j, "interaction"));
  QuantumChannel interaction({"B'E", raw.in_dim}, {"B", raw.out_dim}, raw.kraus);
  std::vector<std::string> labels;
  std::vector<Matrix> states;
  const auto &list = field(j, "env_states");
  if (!list.is_array())
    throw ParseError("\"env_states\" must be an array");
  for (const auto &s : list) {
    labels.push_back(string_field(s, "label"));
    states.push_back(matrix_from_json(field(s, "matrix")));
  }
  return EnvParametrization({"E", de}, std::move(interaction), std::move(labels),
                            std::move(states));
}

Json env_to_json(const EnvParametrization &env) {
  Json j;
  j["kind"] = "env";
  j["env_dim"] = env.env_reg().dim;
  j["interaction"] = kraus_to_json(env.interaction());
  Json states = Json::array();
  for (std::size_t x = 0; x < env.size(); ++x) {
    Json s;
    s["label"] = env.labels()[x];
    s["matrix"] = matrix_to_json(env.env_states()[x]);
    states.push_back(std::move(s));
  }
  j["env_states"] = std::move(states);
  return j;
}

SeizureData seizure_from_json(const Json &j) {
  const auto &probe = field(j, "probe");
  const auto &dims = field(probe, "dims");
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
      !dims[1].is_number_integer())
    throw ParseError("probe \"dims\" must be [dim R, dim B']");
  DensityOperator sigma({{"R", dims[0].get<Eigen::Index>()}, {"B'", dims[1].get<Eigen::Index>()}},
                        matrix_from_json(field(probe, "matrix")));
  const auto raw = raw_kraus_from_json(field(j, "seizer"));
  return {std::move(sigma), QuantumChannel({"RB", raw.in_dim}, {"E", raw.out_dim}, raw.kraus)};
}

Json seizure_to_json(const SeizureData &seize) {
  Json j;
  j["kind"] = "seizure";
  Json probe;
  probe["dims"] = Json::array(
      {seize.probe.registers()[0].dim, seize.probe.registers()[1].dim});
  probe["matrix"] = matrix_to_json(seize.probe.matrix());
  j["probe"] = std::move(probe);
  j["seizer"] = kraus_to_json(seize.seizer);
  return j;
}

Json canonical_document(const Json &j, Eigen::Index in_dim, Eigen::Index out_dim) {
  const std::string kind = document_kind(j);
  if (kind == "collection")
    return collection_to_json(collection_from_json(j));
  if (kind == "group")
    return group_to_json(group_from_json(j));
  if (kind == "state")
    return state_to_json(state_from_json(j));
  if (kind == "codebook")
    return codebook_to_json(codebook_from_json(j));
  if (kind == "protocol")
    return protocol_to_json(protocol_from_json(j, in_dim, out_dim));
  if (kind == "env")
    return env_to_json(env_from_json(j));
  if (kind == "seizure")
    return seizure_to_json(seizure_from_json(j));
  throw ParseError("unknown document kind '" + kind + "'");
}

} // namespace rebound
