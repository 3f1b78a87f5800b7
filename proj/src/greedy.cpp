#include "wpccrn/greedy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace wpccrn {

std::pair<std::vector<double>, std::vector<double>> greedy_allocate(
    const GreedyInstance& instance) {
    const size_t n = instance.weights.size();
    if (instance.capacities.size() != n)
        throw std::invalid_argument("greedy_allocate: size mismatch");
    if (instance.demand < 0.0)
        throw std::invalid_argument("greedy_allocate: negative demand");
    for (size_t i = 0; i < n; ++i)
        if (instance.weights[i] < 0.0 || instance.capacities[i] < 0.0)
            throw std::invalid_argument("greedy_allocate: negative entry");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return instance.weights[a] < instance.weights[b];
    });

    std::vector<double> q(n, 0.0);
    double remaining = instance.demand;
    for (int idx : order) {
        if (remaining <= 0.0) break;
        double take = std::min(instance.capacities[idx], remaining);
        q[idx] = take;
        remaining -= take;
    }
    std::vector<double> p(n);
    for (size_t i = 0; i < n; ++i) p[i] = instance.capacities[i] - q[i];
    return {std::move(p), std::move(q)};
}

std::vector<int> relay_priority_order(const std::vector<double>& gamma_ih,
                                      const std::vector<double>& gamma_ip) {
    if (gamma_ih.size() != gamma_ip.size())
        throw std::invalid_argument("relay_priority_order: size mismatch");
    const size_t n = gamma_ih.size();
    std::vector<double> ratio(n);
    for (size_t i = 0; i < n; ++i)
        ratio[i] = gamma_ip[i] > 0.0 ? gamma_ih[i] / gamma_ip[i]
                                     : std::numeric_limits<double>::infinity();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ratio[a] < ratio[b]; });
    return order;
}

} // namespace wpccrn
