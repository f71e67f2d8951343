#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sebkit/channel.hpp"
#include "sebkit/nullspace.hpp"

namespace sebkit::io {

using json = nlohmann::json;

// Matrices are arrays of rows, each entry a [re, im] pair. `where` names the
// JSON path carried in ParseError messages.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& where);

json vector_to_json(const ComplexVector& v);

json channel_to_json(const Channel& ch);
Channel channel_from_json(const json& j);

json subspace_to_json(const SubspaceSpec& spec);
SubspaceSpec subspace_from_json(const json& j);

ComplexMatrix projection_from_json(const json& j);

// File helpers. Loading validates structure; `verify` additionally gates on
// verify_cptp and throws ValidationError naming the offending representation.
Channel load_channel_file(const std::string& path, const Tolerances& tol, bool verify);
SubspaceSpec load_subspace_file(const std::string& path, const Tolerances& tol);
ComplexMatrix load_projection_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Canonical form: sorted keys, no whitespace, floats at 17 significant
// digits. Identical values serialize to identical bytes.
std::string canonical_dump(const json& j);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace sebkit::io
