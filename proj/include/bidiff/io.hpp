#pragma once

#include "bidiff/moduli.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace bidiff {

/// Parse a curve spec: {"kind":"elliptic","tau":[re,im]} or
/// {"kind":"hyperelliptic","coeffs":[[re,im],...]} (coeffs ascending).
/// Malformed specs raise ConfigError.
Curve curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const Curve& c);

/// Invariant measurements for a kernel dump: the diagonal 2-jet, slice
/// obstruction norms at a family of probe points, and the realized global
/// sign of the cup-product identity (cup of a slice class with the k-th
/// normalized form equals sign * 2*pi*i * v_k(x)).
struct KernelDiagnostics {
    Cplx biresidue;
    Cplx residue_term;
    std::vector<double> obstruction_norms;
    int cup_sign = 0;
    double cup_deviation = 0.0;
};

KernelDiagnostics kernel_diagnostics(const Kernel& k, const PeriodData& pd,
                                     int probes = 5,
                                     const num::AdaptiveOptions& opt = {});

/// Kernel dump: curve spec, pipeline stage, correction matrix (row-major
/// [re,im] pairs) and the diagnostics block. Deterministic except for the
/// generated_at ISO timestamp.
nlohmann::json kernel_to_json(const Kernel& k, const KernelDiagnostics& d);

/// CSV renderings (shortest round-trip decimals, one header line).
std::string connection_csv(const ConnectionSample& s);
std::string moduli_csv(const std::vector<ModuliSample>& samples);
std::string trace_csv(const Genus2Trace& tr);

} // namespace bidiff
