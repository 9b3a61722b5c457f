// Copyright 2026 The shadowframe Authors
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

#include "shadowframe/serialization.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "shadowframe/errors.h"

namespace shadowframe {

namespace {

Complex complex_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ValidationError("expected a complex number as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

// Maps -0.0 to 0.0 so equal operators always serialize identically.
double clean(double x) { return x + 0.0; }

Json vector_to_json(const CVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({clean(v(i).real()), clean(v(i).imag())});
    }
    return out;
}

CVector vector_from_json(const Json &j, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d) {
        throw ValidationError("state vector has the wrong length");
    }
    CVector v(d);
    for (int i = 0; i < d; ++i) {
        v(i) = complex_from_json(j[i]);
    }
    return v;
}

Json optional_number(const std::optional<double> &x) { return x ? Json(*x) : Json(nullptr); }

Json real_vector(const RVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

}  // namespace

Json matrix_to_json(const CMatrix &m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({clean(m(i, j).real()), clean(m(i, j).imag())});
        }
        out.push_back(std::move(row));
    }
    return out;
}

Json operator_to_json(const HermOperator &x) { return matrix_to_json(x.matrix()); }

HermOperator operator_from_json(const Json &j, int expected_dim) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("operator must be a nonempty array of rows");
    }
    const auto d = static_cast<Eigen::Index>(j.size());
    if (expected_dim > 0 && d != expected_dim) {
        throw ValidationError("operator has the wrong dimension");
    }
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != d) {
            throw ValidationError("operator must be square");
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            m(i, k) = complex_from_json(j[i][k]);
        }
    }
    try {
        return HermOperator(m, 1e-10);
    } catch (const std::invalid_argument &e) {
        throw ValidationError(std::string("operator: ") + e.what());
    }
}

Json povm_to_json(const Povm &p) {
    Json out;
    out["dim"] = p.dim();
    Json elements = Json::array();
    for (const auto &e : p.elements()) {
        elements.push_back(operator_to_json(e));
    }
    out["elements"] = std::move(elements);
    if (const auto &rank1 = p.rank1_form()) {
        Json weights = Json::array();
        Json states = Json::array();
        for (const auto &ws : *rank1) {
            weights.push_back(ws.weight);
            states.push_back(vector_to_json(ws.state));
        }
        out["weights"] = std::move(weights);
        out["states"] = std::move(states);
    }
    return out;
}

Povm povm_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("elements")) {
        throw ValidationError("POVM JSON needs \"dim\" and \"elements\"");
    }
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 2) {
        throw ValidationError("POVM JSON: \"dim\" must be an integer >= 2");
    }
    const int d = j["dim"].get<int>();
    const Json &elems = j["elements"];
    if (!elems.is_array() || elems.empty()) {
        throw ValidationError("POVM JSON: \"elements\" must be a nonempty array");
    }
    std::vector<HermOperator> elements;
    for (const auto &e : elems) {
        elements.push_back(operator_from_json(e, d));
    }
    std::optional<std::vector<WeightedState>> rank1;
    if (j.contains("weights") || j.contains("states")) {
        if (!j.contains("weights") || !j.contains("states")) {
            throw ValidationError("POVM JSON: \"weights\" and \"states\" must appear together");
        }
        const Json &w = j["weights"];
        const Json &s = j["states"];
        if (!w.is_array() || !s.is_array() || w.size() != elems.size() || s.size() != elems.size()) {
            throw ValidationError("POVM JSON: need one weight and one state per element");
        }
        rank1.emplace();
        for (std::size_t b = 0; b < w.size(); ++b) {
            if (!w[b].is_number()) {
                throw ValidationError("POVM JSON: weights must be numbers");
            }
            rank1->push_back({w[b].get<double>(), vector_from_json(s[b], d)});
        }
    }
    return Povm(std::move(elements), std::move(rank1));
}

std::string povm_hash(const Povm &p) {
    const std::string text = povm_to_json(p).dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("povm_hash: SHA-256 failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

Json dual_to_json(const DualFrame &dual) {
    Json out;
    out["kind"] = to_string(dual.kind);
    out["dim"] = dual.dim();
    out["frame_rank"] = dual.frame_rank;
    out["support_restricted"] = dual.support_restricted;
    Json elements = Json::array();
    for (const auto &e : dual.elements) {
        elements.push_back(operator_to_json(e));
    }
    out["elements"] = std::move(elements);
    if (!dual.alpha.empty()) {
        out["alpha"] = dual.alpha;
    }
    if (dual.prior) {
        out["prior"] = operator_to_json(*dual.prior);
    }
    return out;
}

Json eig_bounds_to_json(const EigenvalueBounds &e) {
    return {{"form_lower", e.form_lower},         {"form_upper", e.form_upper},
            {"averaged_lower", e.averaged_lower}, {"averaged_upper", e.averaged_upper},
            {"lambda_max", e.lambda_max},         {"lambda_min", e.lambda_min},
            {"condition_number", e.condition_number}};
}

Json report_to_json(const VarianceReport &r) {
    Json out;
    out["dual_kind"] = r.dual_kind;
    out["purity"] = r.purity;
    out["exact"] = optional_number(r.exact);
    out["exact_via_mse"] = optional_number(r.exact_via_mse);
    out["state_error"] = optional_number(r.state_error);
    out["averaged"] = r.averaged;
    out["averaged_method"] = r.averaged_method;
    out["double_averaged"] = optional_number(r.double_averaged);
    Json bounds;
    bounds["eig"] = r.eig ? eig_bounds_to_json(*r.eig) : Json(nullptr);
    bounds["lambda1_star"] = optional_number(r.lambda1_star);
    bounds["worst_case_lower"] = optional_number(r.worst_case_lower);
    bounds["A_min"] = r.a_min;
    bounds["A_max"] = r.a_max;
    bounds["A_trace_over_d"] = r.a_trace_over_d;
    bounds["shadow_norm_sq"] = r.shadow_norm_sq;
    out["bounds"] = std::move(bounds);
    out["A_eigenvalues"] = real_vector(r.a_eigenvalues);
    return out;
}

Json summary_to_json(const RunSummary &s) {
    Json out;
    out["seed"] = s.seed;
    out["N"] = s.n;
    out["K"] = s.groups ? Json(*s.groups) : Json(nullptr);
    out["mean"] = s.mean;
    out["sample_variance"] = s.sample_variance;
    out["median_of_means"] = optional_number(s.median_of_means);
    out["min"] = s.min;
    out["max"] = s.max;
    return out;
}

Json validation_to_json(const PovmValidation &v) {
    Json out;
    out["passed"] = v.passed();
    out["min_eigenvalue"] = v.min_eigenvalue;
    out["completeness_defect"] = v.completeness_defect;
    out["rank1_defect"] = optional_number(v.rank1_defect);
    out["weight_sum_defect"] = optional_number(v.weight_sum_defect);
    out["failures"] = v.failures;
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string histogram_csv(std::span<const HistogramBin> bins) {
    std::ostringstream out;
    out << "low,high,count,density\n";
    for (const auto &b : bins) {
        out << format_double(b.low) << ',' << format_double(b.high) << ',' << b.count << ','
            << format_double(b.density) << '\n';
    }
    return out.str();
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

}  // namespace shadowframe
