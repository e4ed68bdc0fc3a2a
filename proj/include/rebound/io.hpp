#pragma once

// JSON file formats. Matrices are arrays of rows, entries [re, im] pairs.
// Numbers are written as decimal strings with 17 significant digits (+inf as
// "inf") and may be read back either as strings or as JSON numbers.

#include <string>
#include <vector>

#include <json.hpp>

#include "rebound/capacity.hpp"
#include "rebound/protocol.hpp"

namespace rebound {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input (exit code 2 at the command line).
class ParseError : public Error {
public:
  explicit ParseError(const std::string &msg) : Error("ParseError: " + msg) {}
};

std::string format_number(double v);
double parse_number(const Json &j);
Json number_list(const std::vector<double> &v);

Json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j);
Json matrix_list_to_json(const std::vector<Matrix> &ms);
std::vector<Matrix> matrix_list_from_json(const Json &j);

/// Parses a file; throws ParseError on IO or syntax errors.
Json read_json_file(const std::string &path);
std::string read_text_file(const std::string &path);
/// The "kind" field, or "collection" for documents carrying "channels".
std::string document_kind(const Json &j);

/// Raw collection contents, before any CPTP validation.
struct RawChannel {
  std::string label;
  std::vector<Matrix> kraus;
};
struct RawCollection {
  Eigen::Index in_dim = 0;
  Eigen::Index out_dim = 0;
  std::vector<RawChannel> channels;
};

RawCollection raw_collection_from_json(const Json &j);
ChannelCollection collection_from_json(const Json &j);
Json collection_to_json(const ChannelCollection &coll);

GroupRepresentation group_from_json(const Json &j);
Json group_to_json(const GroupRepresentation &rep);

DensityOperator state_from_json(const Json &j);
Json state_to_json(const DensityOperator &rho);

Codebook codebook_from_json(const Json &j);
Json codebook_to_json(const Codebook &code);

/// in_dim / out_dim come from the document when present ("in_dim",
/// "out_dim"), otherwise from the arguments.
ReboundProtocol protocol_from_json(const Json &j, Eigen::Index in_dim, Eigen::Index out_dim);
Json protocol_to_json(const ReboundProtocol &proto);

/// {"kind": "env", "env_dim": d, "interaction": {"in_dim", "out_dim", "kraus"},
///  "env_states": [{"label", "matrix"}]}
EnvParametrization env_from_json(const Json &j);
Json env_to_json(const EnvParametrization &env);

/// {"kind": "seizure", "probe": {"dims": [r, d], "matrix"},
///  "seizer": {"in_dim", "out_dim", "kraus"}}
SeizureData seizure_from_json(const Json &j);
Json seizure_to_json(const SeizureData &seize);

/// Parses any document kind and re-serializes it in canonical form. The
/// dimensions are only used for protocols that do not record their own.
Json canonical_document(const Json &j, Eigen::Index in_dim = 0, Eigen::Index out_dim = 0);

} // namespace rebound
