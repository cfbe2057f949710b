#include "bidiff/io.hpp"

#include "bidiff/projstruct.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <string>

namespace bidiff {

namespace {

std::string fmt(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void append_cplx(std::string& out, Cplx v) {
    out += fmt(v.real());
    out += ',';
    out += fmt(v.imag());
}

nlohmann::json cplx_json(Cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

Cplx cplx_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + " must be a [re, im] pair");
    return Cplx(j[0].get<double>(), j[1].get<double>());
}

const char* stage_name(KernelStage s) {
    switch (s) {
        case KernelStage::Raw: return "raw";
        case KernelStage::ANormalized: return "a_normalized";
        case KernelStage::HodgeCorrected: return "hodge_corrected";
    }
    return "unknown";
}

const char* chart_name(ChartKind k) {
    switch (k) {
        case ChartKind::FlatZ: return "flat_z";
        case ChartKind::AffineX: return "affine_x";
        case ChartKind::InverseX: return "inverse_x";
    }
    return "unknown";
}

std::string iso_timestamp_utc() {
    const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

Curve curve_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("curve spec must be an object with a string \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "elliptic") {
        if (!j.contains("tau")) throw ConfigError("elliptic curve spec needs \"tau\"");
        return make_elliptic(cplx_from_json(j["tau"], "tau"));
    }
    if (kind == "hyperelliptic") {
        if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
            throw ConfigError("hyperelliptic curve spec needs a nonempty \"coeffs\" array");
        std::vector<Cplx> coeffs;
        coeffs.reserve(j["coeffs"].size());
        for (const auto& e : j["coeffs"]) coeffs.push_back(cplx_from_json(e, "coefficient"));
        return make_hyperelliptic(coeffs);
    }
    throw ConfigError("unknown curve kind \"" + kind + "\"");
}

nlohmann::json curve_to_json(const Curve& c) {
    nlohmann::json j;
    if (c.kind == CurveKind::Elliptic) {
        j["kind"] = "elliptic";
        j["tau"] = cplx_json(c.tau);
    } else {
        j["kind"] = "hyperelliptic";
        nlohmann::json coeffs = nlohmann::json::array();
        for (const Cplx& v : c.coeffs) coeffs.push_back(cplx_json(v));
        j["coeffs"] = coeffs;
    }
    j["genus"] = c.genus;
    return j;
}

KernelDiagnostics kernel_diagnostics(const Kernel& k, const PeriodData& pd, int probes,
                                     const num::AdaptiveOptions& opt) {
    if (probes < 1) throw BadConfiguration("kernel_diagnostics needs at least one probe");
    const Curve& c = k.curve;
    const int g = c.genus;

    KernelDiagnostics d;
    Chart natural{};
    SurfacePoint jet_point;
    if (c.kind == CurveKind::Elliptic) {
        natural.kind = ChartKind::FlatZ;
        jet_point = SurfacePoint{0.23 + 0.31 * c.tau, Cplx(0.0)};
    } else {
        natural.kind = ChartKind::AffineX;
        const Cplx x(c.x_ref, std::max(1.0, c.scale));
        jet_point = SurfacePoint{x, y_plus(c, x)};
    }
    const DiagonalJet jet = diagonal_jet(k, natural, jet_point);
    d.biresidue = jet.biresidue;
    d.residue_term = jet.residue_term;

    const auto basis = holomorphic_basis(c);
    std::vector<Cplx> ratios;
    for (int s = 0; s < probes; ++s) {
        SurfacePoint p;
        if (c.kind == CurveKind::Elliptic) {
            const double f = static_cast<double>(s) / probes;
            p = SurfacePoint{(0.18 + 0.6 * f) + (0.22 + 0.55 * f) * c.tau, Cplx(0.0)};
        } else {
            const double im = (0.55 + 0.35 * s) * std::max(1.0, c.scale);
            const Cplx x(0.3 * im - 0.2, im);
            p = SurfacePoint{x, y_plus(c, x)};
        }
        const PeriodVector pv = slice_periods(k, p, pd, opt);
        d.obstruction_norms.push_back(obstruction(pv, pd).O.norm());

        Eigen::VectorXcd u(g);
        for (int j = 0; j < g; ++j) u(j) = eval_differential(c, basis[j], p, natural);
        const Eigen::VectorXcd v = pd.normalizer * u;
        for (int j = 0; j < g; ++j) {
            PeriodVector vj;
            vj.a = Eigen::VectorXcd::Zero(g);
            vj.a(j) = 1.0;
            vj.b = pd.tau.col(j);
            const Cplx target = two_pi_i * v(j);
            if (std::abs(target) > 1e-8) ratios.push_back(cup_product(pv, vj) / target);
        }
    }

    if (!ratios.empty()) {
        Cplx mean = 0.0;
        for (const Cplx& r : ratios) mean += r;
        mean /= static_cast<double>(ratios.size());
        d.cup_sign = mean.real() >= 0.0 ? +1 : -1;
        double dev = 0.0;
        for (const Cplx& r : ratios)
            dev = std::max(dev, std::abs(r - Cplx(static_cast<double>(d.cup_sign))));
        d.cup_deviation = dev;
    }
    return d;
}

nlohmann::json kernel_to_json(const Kernel& k, const KernelDiagnostics& d) {
    nlohmann::json j;
    j["generated_at"] = iso_timestamp_utc();
    j["curve"] = curve_to_json(k.curve);
    j["stage"] = stage_name(k.stage);

    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < k.correction.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index q = 0; q < k.correction.cols(); ++q)
            row.push_back(cplx_json(k.correction(r, q)));
        rows.push_back(row);
    }
    j["correction"] = rows;

    j["diagnostics"] = {{"biresidue", cplx_json(d.biresidue)},
                        {"residue_term", cplx_json(d.residue_term)},
                        {"obstruction_norms", d.obstruction_norms},
                        {"cup_sign", d.cup_sign},
                        {"cup_deviation", d.cup_deviation}};
    return j;
}

std::string connection_csv(const ConnectionSample& s) {
    std::string out = "chart,x_re,x_im,S_re,S_im,err\n";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        out += chart_name(s.chart.kind);
        out += ',';
        append_cplx(out, s.points[i]);
        out += ',';
        append_cplx(out, s.values[i]);
        out += ',';
        out += fmt(i < s.errors.size() ? s.errors[i] : 0.0);
        out += '\n';
    }
    return out;
}

std::string moduli_csv(const std::vector<ModuliSample>& samples) {
    std::string out = "tau_re,tau_im,c_re,c_im,dbar_re,dbar_im,kappa_re,kappa_im,richardson_residual\n";
    for (const ModuliSample& s : samples) {
        append_cplx(out, s.tau);
        out += ',';
        append_cplx(out, s.c);
        out += ',';
        append_cplx(out, s.dbar_c);
        out += ',';
        append_cplx(out, s.kappa);
        out += ',';
        out += fmt(s.richardson_residual);
        out += '\n';
    }
    return out;
}

std::string trace_csv(const Genus2Trace& tr) {
    std::string out = "eps_re,eps_im,S_re,S_im\n";
    for (const TracePoint& p : tr.samples) {
        append_cplx(out, p.eps);
        out += ',';
        append_cplx(out, p.connection);
        out += '\n';
    }
    return out;
}

} // namespace bidiff
