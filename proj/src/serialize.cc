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

#include "stochiso/serialize.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stochiso/errors.h"

namespace stochiso {

namespace {

[[noreturn]] void parse_fail(const std::string &msg) {
    throw Error(ErrorCode::ParseError, msg);
}

bool is_scalar(const Json &j) {
    return j.is_primitive();
}

bool is_short_scalar_array(const Json &j) {
    if (!j.is_array() || j.size() > 2) {
        return false;
    }
    for (const auto &e : j) {
        if (!is_scalar(e)) {
            return false;
        }
    }
    return true;
}

bool prints_inline(const Json &j) {
    bool scalars = true, pairs = true;
    for (const auto &e : j) {
        scalars = scalars && is_scalar(e);
        pairs = pairs && is_short_scalar_array(e);
    }
    return scalars || pairs;
}

void emit_number(double x, std::string &out) {
    if (!std::isfinite(x)) {
        throw Error(ErrorCode::InvalidArgument, "cannot serialize a non-finite number");
    }
    if (x == 0) {
        out += "0";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}

void emit(const Json &j, size_t indent, std::string &out) {
    switch (j.type()) {
        case Json::value_t::number_float:
            emit_number(j.get<double>(), out);
            return;
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out.append(indent + 2, ' ');
                out += Json(it.key()).dump();
                out += ": ";
                emit(it.value(), indent + 2, out);
            }
            out += "\n";
            out.append(indent, ' ');
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (prints_inline(j)) {
                out += "[";
                for (size_t k = 0; k < j.size(); k++) {
                    if (k) {
                        out += ", ";
                    }
                    emit(j[k], indent, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (size_t k = 0; k < j.size(); k++) {
                if (k) {
                    out += ",\n";
                }
                out.append(indent + 2, ' ');
                emit(j[k], indent + 2, out);
            }
            out += "\n";
            out.append(indent, ' ');
            out += "]";
            return;
        }
        default:
            out += j.dump();
    }
}

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        parse_fail(std::string("missing field '") + key + "'");
    }
    return j[key];
}

size_t get_count(const Json &j, const char *key) {
    const Json &v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
        parse_fail(std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<size_t>();
}

double get_real(const Json &v, const std::string &what) {
    if (!v.is_number()) {
        parse_fail(what + " must be a number");
    }
    return v.get<double>();
}

cplx get_complex(const Json &v) {
    if (!v.is_array() || v.size() != 2) {
        parse_fail("complex scalars are [re, im] pairs");
    }
    return {get_real(v[0], "real part"), get_real(v[1], "imaginary part")};
}

ComplexMat get_complex_matrix(const Json &v, size_t rows, size_t cols, const std::string &what) {
    if (!v.is_array() || v.size() != rows) {
        parse_fail(what + " must have " + std::to_string(rows) + " rows");
    }
    ComplexMat m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        if (!v[r].is_array() || v[r].size() != cols) {
            parse_fail(what + " row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        }
        for (size_t c = 0; c < cols; c++) {
            m(r, c) = get_complex(v[r][c]);
        }
    }
    return m;
}

Json projector_json(const Projector &p) {
    Json j;
    j["rank"] = p.rank();
    j["basis"] = complex_matrix_json(p.basis());
    return j;
}

Json vector_json(const CVector &x) {
    Json j = Json::array();
    for (cplx z : x) {
        j.push_back(complex_json(z));
    }
    return j;
}

}  // namespace

std::string dump_canonical(const Json &j) {
    std::string out;
    emit(j, 0, out);
    out += "\n";
    return out;
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception &e) {
        parse_fail(std::string("malformed JSON: ") + e.what());
    }
}

ChannelMatrix ChannelFile::channel() const {
    if (superoperator) {
        return *superoperator;
    }
    return from_form(*form);
}

Json complex_json(cplx z) {
    return Json::array({z.real(), z.imag()});
}

Json complex_matrix_json(const ComplexMat &m) {
    Json rows = Json::array();
    for (size_t r = 0; r < m.rows(); r++) {
        Json row = Json::array();
        for (size_t c = 0; c < m.cols(); c++) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json channel_json(const ChannelMatrix &r) {
    Json mat = Json::array();
    for (size_t a = 0; a < r.mat().rows(); a++) {
        Json row = Json::array();
        for (size_t b = 0; b < r.mat().cols(); b++) {
            row.push_back(r.mat()(a, b));
        }
        mat.push_back(std::move(row));
    }
    Json body;
    body["dim_in"] = r.dim_in();
    body["dim_out"] = r.dim_out();
    body["mat"] = std::move(mat);
    Json j;
    j["superoperator"] = std::move(body);
    return j;
}

Json form_json(const MixedIsometryForm &f) {
    Json comps = Json::array();
    for (const auto &wc : f.components()) {
        Json c;
        c["weight"] = wc.weight;
        c["kind"] = std::string(kind_name(wc.component.kind()));
        c["v"] = complex_matrix_json(wc.component.v());
        comps.push_back(std::move(c));
    }
    Json body;
    body["dim_in"] = f.dim_in();
    body["dim_out"] = f.dim_out();
    body["components"] = std::move(comps);
    Json j;
    j["mixed_isometry"] = std::move(body);
    return j;
}

ChannelFile channel_file_from_json(const Json &j) {
    if (!j.is_object()) {
        parse_fail("channel file must be a JSON object");
    }
    bool has_op = j.contains("superoperator");
    bool has_form = j.contains("mixed_isometry");
    if (has_op == has_form || j.size() != 1) {
        parse_fail("channel file needs exactly one of 'superoperator' or 'mixed_isometry'");
    }
    ChannelFile out;
    if (has_op) {
        const Json &b = j["superoperator"];
        size_t din = get_count(b, "dim_in");
        size_t dout = get_count(b, "dim_out");
        if (din == 0 || dout == 0) {
            parse_fail("dimensions must be positive");
        }
        const Json &mat = field(b, "mat");
        size_t rows = dout * dout, cols = din * din;
        if (!mat.is_array() || mat.size() != rows) {
            parse_fail("mat must have dim_out^2 = " + std::to_string(rows) + " rows");
        }
        std::vector<double> entries;
        entries.reserve(rows * cols);
        for (size_t r = 0; r < rows; r++) {
            if (!mat[r].is_array() || mat[r].size() != cols) {
                parse_fail("mat row " + std::to_string(r) + " must have dim_in^2 = " + std::to_string(cols) +
                           " entries");
            }
            for (size_t c = 0; c < cols; c++) {
                entries.push_back(get_real(mat[r][c], "mat entry"));
            }
        }
        out.superoperator = ChannelMatrix(din, dout, RealMat(rows, cols, std::move(entries)));
        return out;
    }
    const Json &b = j["mixed_isometry"];
    size_t din = get_count(b, "dim_in");
    size_t dout = get_count(b, "dim_out");
    if (din == 0 || dout == 0) {
        parse_fail("dimensions must be positive");
    }
    const Json &comps = field(b, "components");
    if (!comps.is_array() || comps.empty()) {
        parse_fail("components must be a non-empty array");
    }
    std::vector<WeightedComponent> list;
    for (const auto &c : comps) {
        double w = get_real(field(c, "weight"), "weight");
        const Json &k = field(c, "kind");
        if (!k.is_string() || (k != "unitary" && k != "antiunitary")) {
            parse_fail("kind must be \"unitary\" or \"antiunitary\"");
        }
        Kind kind = k == "unitary" ? Kind::Unitary : Kind::Antiunitary;
        ComplexMat v = get_complex_matrix(field(c, "v"), dout, din, "v");
        list.push_back({w, IsometryComponent(kind, std::move(v))});
    }
    out.form = MixedIsometryForm(din, dout, std::move(list));
    return out;
}

ChannelFile parse_channel_file(std::string_view text) {
    return channel_file_from_json(parse_json(text));
}

Json state_json(const HermOp &rho) {
    Json j;
    j["dim"] = rho.dim();
    j["entries"] = complex_matrix_json(rho.mat());
    return j;
}

HermOp parse_state_file(std::string_view text) {
    Json j = parse_json(text);
    size_t d = get_count(j, "dim");
    if (d == 0) {
        parse_fail("dim must be positive");
    }
    ComplexMat m = get_complex_matrix(field(j, "entries"), d, d, "entries");
    HermOp rho = [&] {
        try {
            return HermOp(m, 1e-9);
        } catch (const Error &) {
            parse_fail("state is not Hermitian");
        }
    }();
    if (std::abs(rho.trace() - 1) > 1e-9) {
        parse_fail("state trace is not 1");
    }
    if (herm_eig(rho).values.back() < -1e-9) {
        parse_fail("state is not positive semidefinite");
    }
    return rho;
}

Json probe_pair_json(const ProbePair &p) {
    Json j;
    j["phi"] = vector_json(p.phi);
    j["psi"] = vector_json(p.psi);
    return j;
}

Json fingerprint_json(const SpectralFingerprint &fp) {
    Json arr = Json::array();
    for (const auto &e : fp.entries) {
        Json x;
        x["weight"] = e.weight;
        x["multiplicity"] = e.multiplicity;
        arr.push_back(std::move(x));
    }
    return arr;
}

Json verify_report_json(const VerifyReport &rep) {
    Json j;
    j["trace_preserving"] = {{"ok", rep.trace_preserving.ok}, {"residual", rep.trace_preserving.residual}};
    j["positive_on_probes"] = {{"ok", rep.positive_on_probes.ok},
                               {"worst_min_eig", rep.positive_on_probes.worst_min_eig}};
    j["isometry_on_probes"] = {{"ok", rep.isometry_on_probes.ok},
                               {"worst_defect", rep.isometry_on_probes.residual}};
    j["dual_support"] = {{"ok", rep.dual_support.ok}, {"residual", rep.dual_support.residual}};
    j["worst_pair"] = probe_pair_json(rep.worst_pair);
    Json cp;
    cp["ok"] = rep.completely_positive.ok;
    cp["min_choi_eig"] = rep.completely_positive.min_choi_eig;
    if (rep.completely_positive.witness) {
        cp["witness"] = vector_json(*rep.completely_positive.witness);
        cp["witness_expectation"] = rep.completely_positive.witness_expectation;
    } else {
        cp["witness"] = nullptr;
    }
    j["completely_positive"] = std::move(cp);
    j["pure_on_probes"] = rep.pure_on_probes;
    j["fingerprint"] = rep.fingerprint ? fingerprint_json(*rep.fingerprint) : Json(nullptr);
    j["probes_used"] = rep.probes_used;
    j["seed"] = rep.seed;
    j["tol"] = rep.tol;
    return j;
}

Json decomposition_report_json(const DecompositionReport &rep) {
    Json j;
    j["fingerprint"] = fingerprint_json(rep.fingerprint);
    Json bands = Json::array();
    for (const auto &b : rep.bands) {
        Json x;
        x["weight"] = b.weight;
        x["multiplicity"] = b.multiplicity;
        x["band"] = projector_json(b.band);
        x["m_l"] = b.m_l;
        x["m_a"] = b.m_a;
        x["p_l"] = projector_json(b.p_l);
        x["p_a"] = projector_json(b.p_a);
        Json rails = Json::array();
        for (size_t k = 0; k < b.rails.size(); k++) {
            Json r = projector_json(b.rails[k]);
            r["kind"] = std::string(kind_name(b.rail_kinds[k]));
            rails.push_back(std::move(r));
        }
        x["rails"] = std::move(rails);
        x["mixing_residual"] = b.mixing_residual;
        x["split_residual"] = b.split_residual;
        x["rail_orthogonality_residual"] = b.rail_orthogonality_residual;
        x["transport_residual"] = b.transport_residual;
        bands.push_back(std::move(x));
    }
    j["bands"] = std::move(bands);
    j["p0"] = projector_json(rep.p0);
    j["trace_residual"] = rep.trace_residual;
    j["isometry_defect"] = rep.isometry_defect;
    j["block_residual"] = rep.block_residual;
    j["band_orthogonality_residual"] = rep.band_orthogonality_residual;
    j["extraction_residuals"] = rep.extraction_residuals;
    j["reconstruction_error"] = rep.reconstruction_error;
    j["probes_used"] = rep.probes_used;
    j["seed"] = rep.seed;
    j["p0_completion_note"] = rep.p0_completion_note;
    j["notes"] = rep.notes;
    return j;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    }
    out << text;
}

}  // namespace stochiso
