#pragma once

// JSON interchange. Complex entries are [re, im] pairs, matrices are lists of
// rows. Doubles are written in shortest round-trip form, so reading an
// artifact back reproduces every value bit for bit.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gatefid/channel.hpp"
#include "gatefid/minimum.hpp"

namespace gatefid::io {

using json = nlohmann::json;

json to_json(Complex z);
json to_json(const Matrix& m);
json to_json(const Vector& v);

/// `field` names the location in the document for error messages.
Complex complex_from_json(const json& j, const std::string& field);
Matrix matrix_from_json(const json& j, const std::string& field);
Vector vector_from_json(const json& j, const std::string& field);

/// {"dim_in", "dim_out", "kraus": [matrix...]}
json channel_to_json(const KrausMap& map);
/// {"dim_in", "dim_out", "choi": matrix}
json choi_to_json(const ChoiMatrix& choi);

/// Accepts either the Kraus or the Choi layout.
KrausMap kraus_map_from_json(const json& j);
QuantumChannel channel_from_json(const json& j, double tol = kChannelTolerance);
ChoiMatrix choi_from_json(const json& j);

json net_to_json(const StateNet& net);
StateNet net_from_json(const json& j);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string inputs_hash(const json& inputs);

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gatefid::io
