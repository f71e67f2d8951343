#include "sebkit/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sebkit::io {

namespace {

const json& expect_field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

Index expect_positive_int(const json& j, const char* key, const std::string& where) {
    const json& field = expect_field(j, key, where);
    if (!field.is_number_integer() || field.get<Index>() <= 0) {
        throw ParseError(where + "." + key + ": expected a positive integer");
    }
    return field.get<Index>();
}

double number_or_throw(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array of rows");
    const Index rows = static_cast<Index>(j.size());
    Index cols = -1;
    ComplexMatrix out;
    for (Index r = 0; r < rows; ++r) {
        const json& row = j.at(static_cast<std::size_t>(r));
        const std::string row_where = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.empty()) {
            throw ParseError(row_where + ": expected a nonempty row array");
        }
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            out.resize(rows, cols);
        } else if (static_cast<Index>(row.size()) != cols) {
            throw ParseError(row_where + ": ragged row length");
        }
        for (Index c = 0; c < cols; ++c) {
            const json& entry = row.at(static_cast<std::size_t>(c));
            const std::string entry_where = row_where + "[" + std::to_string(c) + "]";
            if (!entry.is_array() || entry.size() != 2) {
                throw ParseError(entry_where + ": expected a [re, im] pair");
            }
            const double re = number_or_throw(entry.at(0), entry_where + "[0]");
            const double im = number_or_throw(entry.at(1), entry_where + "[1]");
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw ParseError(entry_where + ": non-finite entry");
            }
            out(r, c) = Complex(re, im);
        }
    }
    return out;
}

json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(json::array({v(i).real(), v(i).imag()}));
    }
    return out;
}

json channel_to_json(const Channel& ch) {
    json out;
    out["dim_in"] = dim_in(ch);
    out["dim_out"] = dim_out(ch);
    out["representation"] = representation_name(ch);
    if (const auto* kraus = std::get_if<KrausChannel>(&ch)) {
        json ops = json::array();
        for (const ComplexMatrix& e : kraus->kraus) ops.push_back(matrix_to_json(e));
        out["kraus"] = std::move(ops);
    } else if (const auto* holevo = std::get_if<HolevoChannel>(&ch)) {
        json states = json::array();
        json effects = json::array();
        for (const HolevoPair& pair : holevo->pairs) {
            states.push_back(matrix_to_json(pair.state));
            effects.push_back(matrix_to_json(pair.effect));
        }
        out["holevo"] = json{{"states", std::move(states)}, {"effects", std::move(effects)}};
    } else {
        const auto& choi = std::get<WeightedChoi>(ch);
        out["choi"] = json{{"weights", choi.weights}, {"sigma", matrix_to_json(choi.sigma)}};
    }
    return out;
}

Channel channel_from_json(const json& j) {
    const Index d_in = expect_positive_int(j, "dim_in", "channel");
    const Index d_out = expect_positive_int(j, "dim_out", "channel");
    const json& rep = expect_field(j, "representation", "channel");
    if (!rep.is_string()) throw ParseError("channel.representation: expected a string");
    const std::string tag = rep.get<std::string>();

    const int payloads = static_cast<int>(j.contains("kraus")) +
                         static_cast<int>(j.contains("holevo")) +
                         static_cast<int>(j.contains("choi"));
    if (payloads != 1 || !j.contains(tag)) {
        throw ParseError("channel: exactly one representation payload must be present and "
                         "must match the tag '" + tag + "'");
    }

    if (tag == "kraus") {
        const json& ops = j.at("kraus");
        if (!ops.is_array() || ops.empty()) {
            throw ParseError("channel.kraus: expected a nonempty array of matrices");
        }
        KrausChannel ch;
        ch.dim_in = d_in;
        ch.dim_out = d_out;
        for (std::size_t k = 0; k < ops.size(); ++k) {
            ch.kraus.push_back(matrix_from_json(ops.at(k), "channel.kraus[" + std::to_string(k) + "]"));
        }
        return ch;
    }
    if (tag == "holevo") {
        const json& payload = j.at("holevo");
        const json& states = expect_field(payload, "states", "channel.holevo");
        const json& effects = expect_field(payload, "effects", "channel.holevo");
        if (!states.is_array() || !effects.is_array() || states.size() != effects.size() ||
            states.empty()) {
            throw ParseError("channel.holevo: states and effects must be nonempty arrays of "
                             "equal length");
        }
        HolevoChannel ch;
        ch.dim_in = d_in;
        ch.dim_out = d_out;
        for (std::size_t k = 0; k < states.size(); ++k) {
            HolevoPair pair;
            pair.state =
                matrix_from_json(states.at(k), "channel.holevo.states[" + std::to_string(k) + "]");
            pair.effect = matrix_from_json(effects.at(k),
                                           "channel.holevo.effects[" + std::to_string(k) + "]");
            ch.pairs.push_back(std::move(pair));
        }
        return ch;
    }
    if (tag == "choi") {
        const json& payload = j.at("choi");
        const json& weights = expect_field(payload, "weights", "channel.choi");
        if (!weights.is_array()) throw ParseError("channel.choi.weights: expected an array");
        WeightedChoi ch;
        ch.dim_in = d_in;
        ch.dim_out = d_out;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            ch.weights.push_back(
                number_or_throw(weights.at(k), "channel.choi.weights[" + std::to_string(k) + "]"));
        }
        ch.sigma = matrix_from_json(expect_field(payload, "sigma", "channel.choi"),
                                    "channel.choi.sigma");
        return ch;
    }
    throw ParseError("channel.representation: unknown tag '" + tag + "'");
}

json subspace_to_json(const SubspaceSpec& spec) {
    json out;
    out["dim"] = spec.dim;
    json gens = json::array();
    for (const ComplexMatrix& g : spec.generators) gens.push_back(matrix_to_json(g));
    out["generators"] = std::move(gens);
    return out;
}

SubspaceSpec subspace_from_json(const json& j) {
    SubspaceSpec spec;
    spec.dim = expect_positive_int(j, "dim", "subspace");
    const json& gens = expect_field(j, "generators", "subspace");
    if (!gens.is_array()) throw ParseError("subspace.generators: expected an array");
    for (std::size_t k = 0; k < gens.size(); ++k) {
        spec.generators.push_back(
            matrix_from_json(gens.at(k), "subspace.generators[" + std::to_string(k) + "]"));
    }
    return spec;
}

ComplexMatrix projection_from_json(const json& j) {
    return matrix_from_json(expect_field(j, "matrix", "projection"), "projection.matrix");
}

namespace {

json parse_file(const std::string& path) {
    const std::string text = read_file(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(path + ": malformed JSON");
    return j;
}

}  // namespace

Channel load_channel_file(const std::string& path, const Tolerances& tol, bool verify) {
    Channel ch = channel_from_json(parse_file(path));
    validate(ch, tol);
    if (verify) {
        const CptpReport report = verify_cptp(ch, tol);
        if (!report.ok) {
            std::string location;
            if (std::holds_alternative<KrausChannel>(ch)) {
                location = "channel.kraus";
            } else if (std::holds_alternative<HolevoChannel>(ch)) {
                location = report.tp_residual > tol.eps_recon ? "channel.holevo.effects"
                                                              : "channel.holevo.states";
            } else {
                location = "channel.choi.sigma";
            }
            std::ostringstream os;
            os << path << ": " << location << ": channel is not CPTP (tp_residual "
               << report.tp_residual << ", cp_lambda_min " << report.cp_lambda_min << ")";
            throw ValidationError(os.str());
        }
    }
    return ch;
}

SubspaceSpec load_subspace_file(const std::string& path, const Tolerances& tol) {
    SubspaceSpec spec = subspace_from_json(parse_file(path));
    validate(spec, tol);
    return spec;
}

ComplexMatrix load_projection_file(const std::string& path) {
    return projection_from_json(parse_file(path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

void dump_number(std::string& out, double value) {
    if (!std::isfinite(value)) {
        throw ValidationError("canonical_dump: non-finite number");
    }
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out += buffer;
}

void dump_value(std::string& out, const json& j) {
    switch (j.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            dump_number(out, j.get<double>());
            break;
        case json::value_t::string:
            out += json(j.get<std::string>()).dump();
            break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const json& item : j) {
                if (!first) out += ',';
                first = false;
                dump_value(out, item);
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.cbegin(); it != j.cend(); ++it) {  // nlohmann keeps keys sorted
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_value(out, it.value());
            }
            out += '}';
            break;
        }
        default:
            throw ValidationError("canonical_dump: unsupported JSON value type");
    }
}

}  // namespace

std::string canonical_dump(const json& j) {
    std::string out;
    dump_value(out, j);
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, fnv1a64(bytes));
    return buffer;
}

}  // namespace sebkit::io
