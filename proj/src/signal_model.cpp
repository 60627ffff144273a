#include "jiomber/signal_model.hpp"

#include <cmath>
#include <string>

#include "jiomber/errors.hpp"

namespace jiomber {

namespace {

struct PreferredPair {
    int degree;
    std::vector<int> taps_u;
    std::vector<int> taps_v;
};

// Recurrence offsets. Degree 5: x^5+x^2+1 and x^5+x^4+x^3+x^2+1.
const std::vector<PreferredPair>& preferred_pairs() {
    static const std::vector<PreferredPair> pairs = {
        {3, {0, 1}, {0, 2}},
        {5, {0, 2}, {0, 2, 3, 4}},
        {7, {0, 3}, {0, 1, 2, 3}},
    };
    return pairs;
}

SpreadingCode to_code(const std::vector<std::uint8_t>& bits, int user_id) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(bits.size()));
    SpreadingCode code;
    code.user_id = user_id;
    code.chips.resize(static_cast<Eigen::Index>(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i)
        code.chips[static_cast<Eigen::Index>(i)] = bits[i] ? -scale : scale;
    return code;
}

}  // namespace

std::vector<std::uint8_t> m_sequence(int degree, const std::vector<int>& taps) {
    if (degree < 2 || degree > 30) throw ConfigError("m_sequence: degree out of range");
    const std::size_t length = (std::size_t{1} << degree) - 1;
    std::vector<std::uint8_t> s(static_cast<std::size_t>(degree), 1);
    s.reserve(length);
    while (s.size() < length) {
        const std::size_t n = s.size() - static_cast<std::size_t>(degree);
        std::uint8_t v = 0;
        for (int t : taps) v ^= s[n + static_cast<std::size_t>(t)];
        s.push_back(v);
    }
    return s;
}

std::vector<SpreadingCode> generate_gold_family(int degree) {
    const PreferredPair* pair = nullptr;
    for (const auto& p : preferred_pairs())
        if (p.degree == degree) pair = &p;
    if (!pair)
        throw ConfigError("generate_gold_family: unsupported degree " + std::to_string(degree) +
                          " (supported: 3, 5, 7)");

    const auto u = m_sequence(degree, pair->taps_u);
    const auto v = m_sequence(degree, pair->taps_v);
    const std::size_t n = u.size();

    std::vector<SpreadingCode> family;
    family.reserve(n + 2);
    family.push_back(to_code(u, 0));
    family.push_back(to_code(v, 1));
    std::vector<std::uint8_t> mixed(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) mixed[i] = u[i] ^ v[(i + k) % n];
        family.push_back(to_code(mixed, static_cast<int>(family.size())));
    }
    return family;
}

int periodic_correlation(const std::vector<int>& a, const std::vector<int>& b, int shift) {
    detail::require(a.size() == b.size() && !a.empty(), "periodic_correlation: length mismatch");
    const auto n = static_cast<int>(a.size());
    const int s = ((shift % n) + n) % n;
    int acc = 0;
    for (int i = 0; i < n; ++i) acc += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>((i + s) % n)];
    return acc;
}

RMat build_convolution_matrix(const SpreadingCode& code, int num_paths) {
    if (num_paths < 1) throw ConfigError("build_convolution_matrix: Lp must be >= 1");
    const int n = code.length();
    if (n < 1) throw ConfigError("build_convolution_matrix: empty code");
    RMat c = RMat::Zero(n + num_paths - 1, num_paths);
    for (int l = 0; l < num_paths; ++l) c.col(l).segment(l, n) = code.chips;
    return c;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

}  // namespace jiomber
