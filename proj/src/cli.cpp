#include "sebkit/cli.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sebkit/dilation.hpp"
#include "sebkit/io.hpp"
#include "sebkit/seb.hpp"
#include "sebkit/structure.hpp"

namespace sebkit {

namespace {

using io::json;

struct GlobalOptions {
    Tolerances tol;
    std::uint64_t seed = 0;
    std::string report_format = "json";
    bool no_verify = false;
};

json tolerances_to_json(const Tolerances& tol) {
    return json{{"eps_herm", tol.eps_herm},
                {"eps_psd", tol.eps_psd},
                {"eps_comm", tol.eps_comm},
                {"eps_recon", tol.eps_recon},
                {"eps_rank", tol.eps_rank}};
}

json input_digest(const std::string& path) {
    const std::string bytes = io::read_file(path);
    return json{{"path", path},
                {"bytes", static_cast<std::uint64_t>(bytes.size())},
                {"fnv1a64", io::fnv1a64_hex(bytes)}};
}

std::vector<double> parse_weights(const std::string& csv) {
    std::vector<double> weights;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double w = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            weights.push_back(w);
        } catch (const std::exception&) {
            throw BadWeights("--weights: cannot parse '" + item + "' as a number");
        }
    }
    if (weights.empty()) throw BadWeights("--weights: empty list");
    return weights;
}

RankOneKraus rank_one_from_channel(const Channel& ch, const Tolerances& tol) {
    if (const auto* holevo = std::get_if<HolevoChannel>(&ch)) return to_rank_one(*holevo, tol);
    if (const auto* kraus = std::get_if<KrausChannel>(&ch)) return to_rank_one(*kraus, tol);
    return to_rank_one(choi_to_kraus(std::get<WeightedChoi>(ch), tol), tol);
}

void emit_report(std::ostream& out, const GlobalOptions& opt, const std::string& command,
                 const json& inputs, const json& payload, bool ok, long long runtime_ms) {
    json report;
    report["command"] = command;
    report["inputs"] = inputs;
    report["tolerances"] = tolerances_to_json(opt.tol);
    report["payload"] = payload;
    report["ok"] = ok;
    if (opt.report_format == "json") {
        // Canonical reports carry no timing so identical runs are
        // byte-identical.
        out << io::canonical_dump(report) << "\n";
    } else {
        out << "command: " << command << "\n";
        for (const json& input : report["inputs"]) {
            out << "input: " << input["path"].get<std::string>() << " ("
                << input["bytes"].get<std::uint64_t>() << " bytes, fnv1a64 "
                << input["fnv1a64"].get<std::string>() << ")\n";
        }
        out << "ok: " << (ok ? "true" : "false") << "\n";
        out << "runtime_ms: " << runtime_ms << "\n";
        out << "payload: " << io::canonical_dump(payload) << "\n";
    }
}

struct CommandResult {
    json payload;
    bool ok = false;
};

json matrices_to_json(const std::vector<ComplexMatrix>& mats) {
    json out = json::array();
    for (const ComplexMatrix& m : mats) out.push_back(io::matrix_to_json(m));
    return out;
}

CommandResult do_verify(const std::string& path, const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, /*verify=*/false);
    const CptpReport report = verify_cptp(ch, opt.tol);
    CommandResult result;
    result.payload = json{{"representation", representation_name(ch)},
                          {"dim_in", dim_in(ch)},
                          {"dim_out", dim_out(ch)},
                          {"tp_residual", report.tp_residual},
                          {"cp_lambda_min", report.cp_lambda_min}};
    result.ok = report.ok;
    return result;
}

CommandResult do_range_comm(const std::string& path, const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, !opt.no_verify);
    const RangeCommutativityReport report = range_commutativity_test(ch, opt.tol);
    CommandResult result;
    result.payload = json{
        {"commutes", report.commutes},
        {"worst_pair", json::array({json::array({report.worst_first[0], report.worst_first[1]}),
                                    json::array({report.worst_second[0], report.worst_second[1]})})},
        {"worst_residual", report.worst_residual},
        {"adjoint_closure_residual", report.adjoint_closure_residual}};
    result.ok = report.commutes;
    return result;
}

CommandResult do_decompose(const std::string& path, const std::string& weights_csv,
                           const std::string& out_path, const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, !opt.no_verify);
    const std::vector<double> weights =
        weights_csv.empty() ? uniform_weights(dim_in(ch)) : parse_weights(weights_csv);

    const SebDecomposition dec = decompose_seb(ch, weights, opt.seed, opt.tol);
    const SeparabilityReport ver = verify_separable_decomposition(dec, ch, opt.tol);

    json terms = json::array();
    for (const SebTerm& term : dec.terms) {
        terms.push_back(json{{"probability", term.probability},
                             {"state", io::matrix_to_json(term.state)},
                             {"vector", io::vector_to_json(term.vector)}});
    }
    CommandResult result;
    result.payload = json{{"seed", opt.seed},
                          {"weights", dec.weights},
                          {"u", io::matrix_to_json(dec.u)},
                          {"terms", std::move(terms)},
                          {"effects", matrices_to_json(dec.effects)},
                          {"preparations", matrices_to_json(dec.preparations)},
                          {"dropped_mass", dec.dropped_mass},
                          {"verification", json{{"sigma_residual", ver.sigma_residual},
                                                {"reconstruction_residual",
                                                 ver.reconstruction_residual},
                                                {"povm_residual", ver.povm_residual},
                                                {"psd_min", ver.psd_min}}}};
    result.ok = ver.ok;
    if (!out_path.empty()) {
        const Channel derived = decomposition_to_holevo(dec);
        io::write_file(out_path, io::canonical_dump(io::channel_to_json(derived)) + "\n");
    }
    return result;
}

CommandResult do_synth_null(const std::string& path, const std::string& out_path,
                            const GlobalOptions& opt) {
    const SubspaceSpec spec = io::load_subspace_file(path, opt.tol);
    const NullspaceChannel built = synthesize_channel(spec, opt.tol);
    const NullspaceReport report = verify_nullspace(built, spec, opt.tol);

    CommandResult result;
    result.payload =
        json{{"dim", spec.dim},
             {"subspace_dimension", subspace_dimension(spec, opt.tol)},
             {"effect_count", built.channel.dim_out},
             {"lambda_min_f1", built.lambda_min_f1},
             {"verification", json{{"generator_residuals", report.generator_residuals},
                                   {"rank_of_effect_map", report.rank_of_effect_map},
                                   {"expected_rank", report.expected_rank}}}};
    result.ok = report.ok;
    if (!out_path.empty()) {
        const Channel derived = built.channel;
        io::write_file(out_path, io::canonical_dump(io::channel_to_json(derived)) + "\n");
    }
    return result;
}

CommandResult do_dilate(const std::string& path, const std::string& out_path,
                        const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, !opt.no_verify);
    const HolevoChannel holevo = to_holevo(ch, opt.tol);
    const DilationResult dil = build_dilation(holevo, opt.tol);
    const DilationReport report = verify_dilation(dil, holevo, opt.tol);

    CommandResult result;
    result.payload = json{
        {"block_count", dil.block_count},
        {"dilation_dim", dil.dilation_dim()},
        {"verification", json{{"isometry_residual", report.isometry_residual},
                              {"reconstruction_residual", report.reconstruction_residual},
                              {"commutativity_residual", report.commutativity_residual}}}};
    result.ok = report.ok;
    if (!out_path.empty()) {
        json artifact = json{{"isometry", io::matrix_to_json(dil.isometry)},
                             {"block_count", dil.block_count},
                             {"block_dim", dil.block_dim},
                             {"preparations", matrices_to_json(dil.preparations)}};
        io::write_file(out_path, io::canonical_dump(artifact) + "\n");
    }
    return result;
}

CommandResult do_fixed_points(const std::string& path, const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, !opt.no_verify);
    const RankOneKraus rank_one = rank_one_from_channel(ch, opt.tol);
    const CommutantReport commutant = commutant_projections(rank_one, opt.seed, opt.tol);

    bool all_fixed = true;
    json checks = json::array();
    for (const ComplexMatrix& p : commutant.projections) {
        const FixedPointReport fp = adjoint_fixed_check(rank_one, p, opt.tol);
        all_fixed = all_fixed && fp.fixed;
        checks.push_back(json{{"residual", fp.residual},
                              {"fixed", fp.fixed},
                              {"commutes_with_all_kraus", fp.commutes_with_all_kraus},
                              {"worst_commutator", fp.worst_commutator}});
    }
    CommandResult result;
    result.payload = json{{"seed", opt.seed},
                          {"commutant_dimension", static_cast<std::uint64_t>(commutant.basis.size())},
                          {"projections", matrices_to_json(commutant.projections)},
                          {"pairwise_comm_residual", commutant.pairwise_comm_residual},
                          {"fixed_checks", std::move(checks)}};
    result.ok = all_fixed && commutant.pairwise_comm_residual <= opt.tol.eps_comm;
    return result;
}

CommandResult do_mult_domain(const std::string& path, const std::string& projection_path,
                             const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, !opt.no_verify);
    const ComplexMatrix p = io::load_projection_file(projection_path);
    const RankOneKraus rank_one = rank_one_from_channel(ch, opt.tol);
    const MultiplicativeDomainReport report =
        multiplicative_projection_check(rank_one, p, opt.tol);

    CommandResult result;
    result.payload = json{{"in_domain", report.in_domain},
                          {"worst_product_residual", report.worst_product_residual},
                          {"fix_of_dual_circ_phi", report.fix_of_dual_circ_phi},
                          {"v_eigen_ok", report.v_eigen_ok}};
    result.ok = report.in_domain;
    return result;
}

CommandResult do_convert(const std::string& path, const std::string& target,
                         const std::string& out_path, const GlobalOptions& opt) {
    const Channel ch = io::load_channel_file(path, opt.tol, !opt.no_verify);

    Channel converted = ch;
    if (target == "kraus") {
        converted = to_kraus(ch, opt.tol);
    } else if (target == "holevo") {
        converted = to_holevo(ch, opt.tol);
    } else {
        converted = weighted_choi(ch);
    }

    CommandResult result;
    result.payload = json{{"from", representation_name(ch)}, {"to", target}};
    result.ok = true;
    if (!opt.no_verify) {
        const CptpReport report = verify_cptp(converted, opt.tol);
        result.payload["verification"] = json{{"tp_residual", report.tp_residual},
                                              {"cp_lambda_min", report.cp_lambda_min}};
        result.ok = report.ok;
    }
    const std::string serialized = io::canonical_dump(io::channel_to_json(converted)) + "\n";
    if (!out_path.empty()) {
        io::write_file(out_path, serialized);
    } else {
        result.payload["channel"] = io::channel_to_json(converted);
    }
    return result;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-dimensional toolkit for strongly entanglement breaking channels"};
    app.name("sebkit");
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--tol-herm", opt.tol.eps_herm, "Hermiticity residual bound");
    app.add_option("--tol-psd", opt.tol.eps_psd, "Allowed negative-eigenvalue magnitude");
    app.add_option("--tol-comm", opt.tol.eps_comm, "Relative commutator bound");
    app.add_option("--tol-recon", opt.tol.eps_recon, "Reconstruction residual bound");
    app.add_option("--tol-rank", opt.tol.eps_rank, "Singular-value cutoff for rank decisions");
    app.add_option("--seed", opt.seed, "Seed for randomized algorithms");
    app.add_option("--report", opt.report_format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--no-verify", opt.no_verify, "Skip CPTP validation of input channels");

    std::string channel_path, subspace_path, projection_path, out_path, weights_csv, target;

    CLI::App* cmd_verify = app.add_subcommand("verify", "Check a channel file for CPTP");
    cmd_verify->add_option("channel", channel_path, "channel file")->required();

    CLI::App* cmd_range = app.add_subcommand("range-comm", "Test commutativity of the range");
    cmd_range->add_option("channel", channel_path, "channel file")->required();

    CLI::App* cmd_decompose =
        app.add_subcommand("decompose", "Measure-and-prepare decomposition of a "
                                        "commutative-range channel");
    cmd_decompose->add_option("channel", channel_path, "channel file")->required();
    cmd_decompose->add_option("--weights", weights_csv, "comma-separated Choi weights");
    cmd_decompose->add_option("-o,--output", out_path, "write the derived channel file");

    CLI::App* cmd_synth = app.add_subcommand("synth-null", "Synthesize a channel with a "
                                                           "prescribed null space");
    cmd_synth->add_option("subspace", subspace_path, "subspace file")->required();
    cmd_synth->add_option("-o,--output", out_path, "write the synthesized channel file");

    CLI::App* cmd_dilate = app.add_subcommand("dilate", "Commutative-range dilation");
    cmd_dilate->add_option("channel", channel_path, "channel file")->required();
    cmd_dilate->add_option("-o,--output", out_path, "write the dilation artifact");

    CLI::App* cmd_fixed = app.add_subcommand("fixed-points", "Commutant projections and "
                                                             "fixed-point checks");
    cmd_fixed->add_option("channel", channel_path, "channel file")->required();

    CLI::App* cmd_mult = app.add_subcommand("mult-domain", "Multiplicative-domain membership "
                                                           "of a projection");
    cmd_mult->add_option("channel", channel_path, "channel file")->required();
    cmd_mult->add_option("--projection", projection_path, "projection file")->required();

    CLI::App* cmd_convert = app.add_subcommand("convert", "Convert between representations");
    cmd_convert->add_option("channel", channel_path, "channel file")->required();
    cmd_convert->add_option("--to", target, "target representation")
        ->required()
        ->check(CLI::IsMember({"kraus", "holevo", "choi"}));
    cmd_convert->add_option("-o,--output", out_path, "write the converted channel file");

    std::vector<const char*> argv;
    argv.push_back("sebkit");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "sebkit: " << e.what() << "\n";
        return 2;
    }

    try {
        opt.tol.validate();

        const auto started = std::chrono::steady_clock::now();
        std::string command;
        json inputs = json::array();
        CommandResult result;

        try {
            if (app.got_subcommand(cmd_verify)) {
                command = "verify";
                inputs.push_back(input_digest(channel_path));
                result = do_verify(channel_path, opt);
            } else if (app.got_subcommand(cmd_range)) {
                command = "range-comm";
                inputs.push_back(input_digest(channel_path));
                result = do_range_comm(channel_path, opt);
            } else if (app.got_subcommand(cmd_decompose)) {
                command = "decompose";
                inputs.push_back(input_digest(channel_path));
                result = do_decompose(channel_path, weights_csv, out_path, opt);
            } else if (app.got_subcommand(cmd_synth)) {
                command = "synth-null";
                inputs.push_back(input_digest(subspace_path));
                result = do_synth_null(subspace_path, out_path, opt);
            } else if (app.got_subcommand(cmd_dilate)) {
                command = "dilate";
                inputs.push_back(input_digest(channel_path));
                result = do_dilate(channel_path, out_path, opt);
            } else if (app.got_subcommand(cmd_fixed)) {
                command = "fixed-points";
                inputs.push_back(input_digest(channel_path));
                result = do_fixed_points(channel_path, opt);
            } else if (app.got_subcommand(cmd_mult)) {
                command = "mult-domain";
                inputs.push_back(input_digest(channel_path));
                inputs.push_back(input_digest(projection_path));
                result = do_mult_domain(channel_path, projection_path, opt);
            } else {
                command = "convert";
                inputs.push_back(input_digest(channel_path));
                result = do_convert(channel_path, target, out_path, opt);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const IoError&) {
            throw;
        } catch (const Error& e) {
            // Completed analysis with a negative finding: surface it in the
            // report and exit 1.
            result.payload = json{{"error", json{{"kind", e.kind()}, {"message", e.what()}}}};
            result.ok = false;
        }

        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        emit_report(out, opt, command, inputs, result.payload, result.ok, elapsed);
        return result.ok ? 0 : 1;
    } catch (const Error& e) {
        err << "sebkit: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "sebkit: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sebkit
