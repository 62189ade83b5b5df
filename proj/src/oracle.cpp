#include "hhq/oracle.hpp"

#include "hhq/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhq {

namespace {

constexpr std::size_t kBlock = 4096;

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Midpoint sum over `panels` equal panels, reduced block by block in
// ascending order so the result is independent of evaluation batching.
double midpoint_pass(const FunctionSpec& f, Interval iv, std::size_t panels) {
    double width = iv.length() / static_cast<double>(panels);
    std::vector<double> xs(std::min(panels, kBlock));
    std::vector<double> fx(xs.size());
    std::vector<double> block_sums;
    block_sums.reserve((panels + kBlock - 1) / kBlock);

    std::size_t done = 0;
    while (done < panels) {
        std::size_t n = std::min(kBlock, panels - done);
        for (std::size_t i = 0; i < n; ++i)
            xs[i] = iv.a + (static_cast<double>(done + i) + 0.5) * width;
        f.eval_batch(std::span(xs).first(n), std::span(fx).first(n));
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += fx[i];
        block_sums.push_back(s);
        done += n;
    }
    double total = 0.0;
    for (double s : block_sums) total += s;
    return total * width;
}

} // namespace

OracleResult reference_integral(const FunctionSpec& f, Interval interval,
                                OracleConfig config) {
    if (config.panels < 1024 || !power_of_two(config.panels))
        throw std::invalid_argument(
            "oracle: panels must be a power of two >= 1024");

    double value = midpoint_pass(f, interval, config.panels);
    double check = midpoint_pass(f, interval, config.panels * 2);
    double uncertainty = std::fabs(value - check);
    if (!(uncertainty <= 1e-9 * (1.0 + std::fabs(value))))
        throw OracleError("oracle: uncertainty " + std::to_string(uncertainty) +
                          " exceeds target; integrand looks pathological");
    return {value, uncertainty};
}

} // namespace hhq
