// Timing harness for the parallel sweep kernels vs their serial reference.
// Each case runs the same work under both policies, reports wall time and
// speedup, and cross-checks that the outputs are bitwise identical (every
// kernel writes only its own slot, so the policies must agree exactly).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fuzzybox/geometry.hpp"
#include "fuzzybox/operators.hpp"
#include "fuzzybox/quantizer.hpp"
#include "fuzzybox/states.hpp"
#include "fuzzybox/sweep.hpp"
#include "fuzzybox/windowfn.hpp"

using namespace fuzzybox;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct CaseResult {
    double serial_ms = 0.0;
    double openmp_ms = 0.0;
    std::size_t mismatches = 0;
};

CaseResult run_case(const std::function<std::vector<double>(par::Exec)>& work) {
    CaseResult r;
    double t0 = now_ms();
    const std::vector<double> a = work(par::Exec::serial);
    r.serial_ms = now_ms() - t0;
    t0 = now_ms();
    const std::vector<double> b = work(par::Exec::openmp);
    r.openmp_ms = now_ms() - t0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++r.mismatches; // bitwise comparison on purpose
    return r;
}

void report(const char* name, std::size_t n, const CaseResult& r) {
    std::printf("%-28s %9zu %10.1f %10.1f %7.2fx %s\n", name, n, r.serial_ms, r.openmp_ms,
                r.serial_ms / r.openmp_ms, r.mismatches == 0 ? "bitwise-equal" : "MISMATCH");
}

} // namespace

int main() {
    const Geometry box = Geometry::bounded(0.0, 10.0);
    QuantizationParams prm{0.1, 1.0, 1.0, 1.0};
    prm.validate();

    std::printf("%d thread(s) available\n\n", par::max_threads());
    std::printf("%-28s %9s %10s %10s %8s\n", "case", "points", "serial/ms", "openmp/ms",
                "speedup");

    {
        const std::size_t n = 2000000;
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = -3.0 + 16.0 * double(i) / double(n - 1);
        const auto work = [&](par::Exec exec) {
            return par::sample_curve(xs, exec, [&](double x) {
                return windowfn::window(x, box, prm) +
                       windowfn::window_derivative(2, x, box, prm) +
                       operators::commutator_symbol(x, box, prm);
            });
        };
        report("symbol curve", n, run_case(work));
    }

    {
        const std::size_t n = 300;
        std::vector<double> centers(n);
        for (std::size_t i = 0; i < n; ++i) centers[i] = -4.0 + 18.0 * double(i) / double(n - 1);
        const auto work = [&](par::Exec exec) {
            return states::com_scan(centers, box, prm, 1.0, exec);
        };
        report("commutator scan", n, run_case(work));
    }

    {
        const std::size_t n = 4000;
        const auto work = [&](par::Exec exec) {
            return par::map_to_doubles(n, exec, [&](std::size_t i) {
                const double q = -1.0 + 12.0 * double(i) / double(n - 1);
                const quantizer::ObservableSpec spec{
                    static_cast<quantizer::ObservableKind>(i % 4), true};
                return quantizer::portrait(spec, {q, 7.0}, box, prm,
                                           quantizer::PortraitMethod::closed_form);
            });
        };
        report("portrait grid", n, run_case(work));
    }

    return 0;
}
