// Copyright 2026 The stochiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stochiso/cli.h"

#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "stochiso/decompose.h"
#include "stochiso/generate.h"
#include "stochiso/serialize.h"
#include "stochiso/verify.h"

namespace stochiso {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

const char *yes_no(bool b) {
    return b ? "yes" : "no";
}

/// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty()) {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

struct Options {
    size_t dim_in = 0;
    size_t dim_out = 0;
    std::vector<double> weights;
    std::vector<std::string> kinds;
    bool mix_output = false;

    std::string input;
    std::string state;
    std::string out_path;
    std::string report_path;
    uint64_t seed = 0;
    size_t probes = 0;
    double tol = 1e-8;
};

int cmd_gen(const Options &o, std::ostream &out, std::ostream &) {
    GenSpec spec;
    spec.dim_in = o.dim_in;
    spec.dim_out = o.dim_out;
    spec.weights = o.weights;
    for (const auto &k : o.kinds) {
        spec.kinds.push_back(parse_kind(k));
    }
    spec.seed = o.seed;
    spec.mix_output = o.mix_output;
    emit(o.out_path, dump_canonical(form_json(generate_form(spec))), out);
    return kExitOk;
}

int cmd_verify(const Options &o, std::ostream &out, std::ostream &) {
    ChannelMatrix r = parse_channel_file(read_text_file(o.input)).channel();
    VerifyOptions vo;
    vo.probes = o.probes;
    vo.seed = o.seed;
    vo.tol = o.tol;
    VerifyReport rep = verify_channel(r, vo);

    out << "trace preserving     " << yes_no(rep.trace_preserving.ok) << "  residual " << sci(rep.trace_preserving.residual)
        << "\n";
    out << "positive on probes   " << yes_no(rep.positive_on_probes.ok) << "  min eigenvalue "
        << sci(rep.positive_on_probes.worst_min_eig) << "\n";
    out << "isometry on probes   " << yes_no(rep.isometry_on_probes.ok) << "  defect "
        << sci(rep.isometry_on_probes.residual) << "\n";
    out << "dual support         " << yes_no(rep.dual_support.ok) << "  residual " << sci(rep.dual_support.residual)
        << "\n";
    out << "completely positive  " << yes_no(rep.completely_positive.ok) << "  min Choi eigenvalue "
        << sci(rep.completely_positive.min_choi_eig) << "\n";
    out << "pure on probes       " << yes_no(rep.pure_on_probes) << "\n";
    if (rep.fingerprint) {
        out << "fingerprint         ";
        for (const auto &e : rep.fingerprint->entries) {
            out << " " << e.weight << " x" << e.multiplicity;
        }
        out << "\n";
    }
    int code = !rep.stochastic() ? kExitNotStochastic : !rep.isometry() ? kExitNotIsometry : kExitOk;
    out << "verdict: "
        << (code == kExitOk ? "stochastic isometry" : code == kExitNotStochastic ? "not stochastic" : "not an isometry")
        << "\n";
    if (!o.report_path.empty()) {
        write_text_file(o.report_path, dump_canonical(verify_report_json(rep)));
    }
    return code;
}

int cmd_decompose(const Options &o, std::ostream &out, std::ostream &err) {
    ChannelMatrix r = parse_channel_file(read_text_file(o.input)).channel();
    DecomposeOptions dopt;
    dopt.seed = o.seed;
    dopt.probes = o.probes;
    dopt.trace_tol = o.tol;
    dopt.isometry_tol = o.tol;
    try {
        Decomposition dec = decompose(r, dopt);
        emit(o.out_path, dump_canonical(form_json(dec.form)), out);
        if (!o.report_path.empty()) {
            write_text_file(o.report_path, dump_canonical(decomposition_report_json(dec.report)));
        }
        std::ostream &info = o.out_path.empty() ? err : out;
        info << "components: " << dec.form.size() << "\n";
        info << "reconstruction_error: " << sci(dec.report.reconstruction_error) << "\n";
        return kExitOk;
    } catch (const NotAnIsometryError &e) {
        Json j;
        j["error"] = std::string(error_code_name(e.code()));
        j["stage"] = e.stage();
        j["message"] = e.what();
        j["defect"] = e.defect();
        j["failing_pair"] = probe_pair_json(e.pair());
        std::string text = dump_canonical(j);
        err << text;
        if (!o.report_path.empty()) {
            write_text_file(o.report_path, text);
        }
        return kExitNotIsometry;
    }
}

int cmd_reverse(const Options &o, std::ostream &out, std::ostream &err) {
    ChannelFile f = parse_channel_file(read_text_file(o.input));
    if (!f.form) {
        throw Error(ErrorCode::ParseError, "reverse needs a mixed_isometry file");
    }
    ChannelMatrix s = reversal(*f.form);
    double residual = max_abs_diff(compose(s, from_form(*f.form)).mat(), RealMat::identity(f.form->dim_in() * f.form->dim_in()));
    emit(o.out_path, dump_canonical(channel_json(s)), out);
    (o.out_path.empty() ? err : out) << "reversal residual: " << sci(residual) << "\n";
    return kExitOk;
}

int cmd_apply(const Options &o, std::ostream &out, std::ostream &) {
    ChannelMatrix r = parse_channel_file(read_text_file(o.input)).channel();
    HermOp rho = parse_state_file(read_text_file(o.state));
    if (rho.dim() != r.dim_in()) {
        throw Error(ErrorCode::DimMismatch,
                    "state has dim " + std::to_string(rho.dim()) + ", channel expects " + std::to_string(r.dim_in()));
    }
    emit(o.out_path, dump_canonical(state_json(apply(r, rho))), out);
    return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::InvalidArgument:
        case ErrorCode::DimMismatch:
        case ErrorCode::DimensionInsufficient:
        case ErrorCode::NotHermitian:
        case ErrorCode::NotIsometric:
        case ErrorCode::WeightsNotNormalized:
        case ErrorCode::RangesNotOrthogonal:
        case ErrorCode::BlockNotHomogeneous:
        case ErrorCode::GammaNotUnitary:
            return kExitUsage;
        case ErrorCode::NotStochastic:
            return kExitNotStochastic;
        case ErrorCode::NotAnIsometry:
            return kExitNotIsometry;
        default:
            return kExitNumeric;
    }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stochastic isometries: generate, verify, decompose, reverse, apply.", "stochiso"};
    app.require_subcommand(1);
    Options o;

    auto *gen = app.add_subcommand("gen", "Write a seeded mixed_isometry instance");
    gen->add_option("--dim-in", o.dim_in, "Input dimension")->required();
    gen->add_option("--dim-out", o.dim_out, "Output dimension")->required();
    gen->add_option("--weights", o.weights, "Comma separated weights")->required()->delimiter(',');
    gen->add_option("--kinds", o.kinds, "Comma separated kinds (u or a)")->required()->delimiter(',');
    gen->add_flag("--mix-output", o.mix_output, "Rotate the ranges by a shared Haar unitary");

    auto *ver = app.add_subcommand("verify", "Run every predicate on a channel file");
    ver->add_option("input", o.input, "Channel file")->required();
    ver->add_option("--report", o.report_path, "Write the JSON report here");

    auto *dec = app.add_subcommand("decompose", "Decompose a stochastic isometry");
    dec->add_option("input", o.input, "Channel file")->required();
    dec->add_option("--report", o.report_path, "Write the JSON report here");

    auto *rev = app.add_subcommand("reverse", "Write the reversal map of a mixed_isometry file");
    rev->add_option("input", o.input, "mixed_isometry file")->required();

    auto *app_cmd = app.add_subcommand("apply", "Apply a channel to a state");
    app_cmd->add_option("channel", o.input, "Channel file")->required();
    app_cmd->add_option("state", o.state, "State file")->required();

    for (auto *sub : {gen, ver, dec, rev, app_cmd}) {
        sub->add_option("--out", o.out_path, "Output path (default: standard output)");
    }
    for (auto *sub : {gen, ver, dec}) {
        sub->add_option("--seed", o.seed, "Seed for all random draws");
    }
    for (auto *sub : {ver, dec}) {
        sub->add_option("--probes", o.probes, "Probe count (default max(16, 4 d))");
        sub->add_option("--tol", o.tol, "Tolerance for the trace, positivity and isometry checks")
            ->check(CLI::PositiveNumber);
    }

    std::vector<std::string> argv_store{"stochiso"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(o, out, err);
        }
        if (ver->parsed()) {
            return cmd_verify(o, out, err);
        }
        if (dec->parsed()) {
            return cmd_decompose(o, out, err);
        }
        if (rev->parsed()) {
            return cmd_reverse(o, out, err);
        }
        return cmd_apply(o, out, err);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace stochiso
