#include "jiomber/complexity.hpp"

#include <ostream>

#include "jiomber/errors.hpp"

namespace jiomber {

namespace {

constexpr struct {
    Algorithm algorithm;
    std::string_view name;
} kNames[] = {
    {Algorithm::FullRankLMS, "FullRankLMS"},
    {Algorithm::FullRankMBER, "FullRankMBER"},
    {Algorithm::MWF_LMS, "MWF_LMS"},
    {Algorithm::EIG, "EIG"},
    {Algorithm::JIO_LMS, "JIO_LMS"},
    {Algorithm::MWF_MBER, "MWF_MBER"},
    {Algorithm::JIO_MBER, "JIO_MBER"},
    {Algorithm::JIO_MBER_AutoRank, "JIO_MBER_AutoRank"},
};

std::int64_t need(const std::optional<std::int64_t>& v, const char* name, Algorithm a) {
    if (!v) throw ConfigError(std::string(to_string(a)) + ": missing parameter " + name);
    if (*v < 1) throw ConfigError(std::string(to_string(a)) + ": parameter " + name + " must be >= 1");
    return *v;
}

}  // namespace

std::string_view to_string(Algorithm a) {
    for (const auto& n : kNames)
        if (n.algorithm == a) return n.name;
    return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
    for (const auto& n : kNames)
        if (n.name == name) return n.algorithm;
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all = [] {
        std::vector<Algorithm> v;
        for (const auto& n : kNames) v.push_back(n.algorithm);
        return v;
    }();
    return all;
}

OpCountReport op_count(Algorithm algorithm, const OpCountParams& p) {
    OpCountReport rep{algorithm, 0, 0, p, false};
    const auto M = [&] { return need(p.M, "M", algorithm); };
    const auto D = [&] { return need(p.D, "D", algorithm); };
    const auto J = [&] { return need(p.J, "J", algorithm); };

    switch (algorithm) {
        case Algorithm::FullRankLMS: {
            const auto m = M();
            rep.multiplications = 2 * m + 1;
            rep.additions = 2 * m;
            break;
        }
        case Algorithm::FullRankMBER: {
            const auto m = M();
            rep.multiplications = 4 * m + 1;
            rep.additions = 4 * m - 1;
            break;
        }
        case Algorithm::MWF_LMS: {
            const auto m = M(), d = D();
            rep.multiplications = d * m * m - m * m + 2 * d * m + 4 * d + 1;
            rep.additions = d * m * m - m * m + 3 * d - 2;
            break;
        }
        case Algorithm::EIG: {
            const auto m = M();
            rep.multiplications = m * m * m;
            rep.additions = m * m * m;
            rep.asymptotic = true;
            break;
        }
        case Algorithm::JIO_LMS: {
            const auto m = M(), d = D();
            rep.multiplications = 3 * d * m + m + 3 * d + 6;
            rep.additions = 2 * d * m + m + 4 * d - 2;
            break;
        }
        case Algorithm::MWF_MBER: {
            const auto m = M(), d = D(), lp = need(p.Lp, "Lp", algorithm);
            rep.multiplications = (d + 1) * m * m + (3 * d + 1) * m + 3 * d + m * lp + 10;
            rep.additions = (d - 1) * m * m + (2 * d - 1) * m + 2 * d + m * lp + 1;
            break;
        }
        case Algorithm::JIO_MBER: {
            const auto m = M(), d = D(), j = J();
            rep.multiplications = 6 * m * d * j + 5 * d * j + m * j + 11 * j;
            rep.additions = 5 * m * d * j + d * j - m * j - j;
            break;
        }
        case Algorithm::JIO_MBER_AutoRank: {
            const auto m = M(), dmax = need(p.D_max, "D_max", algorithm);
            rep.multiplications = (6 * m + 5) * dmax + m + 11;
            rep.additions = (5 * m + 1) * dmax - m - 1;
            break;
        }
    }
    return rep;
}

std::vector<OpCountReport> complexity_sweep(const std::vector<Algorithm>& algorithms,
                                            const ComplexityGrid& grid) {
    auto axis = [](const std::vector<std::int64_t>& v) {
        std::vector<std::optional<std::int64_t>> out(v.begin(), v.end());
        if (out.empty()) out.emplace_back();
        return out;
    };
    if (grid.M.empty() && grid.D.empty() && grid.J.empty() && grid.Lp.empty() && grid.D_max.empty())
        throw ConfigError("complexity_sweep: empty parameter grid");

    std::vector<OpCountReport> rows;
    for (Algorithm a : algorithms)
        for (const auto& m : axis(grid.M))
            for (const auto& d : axis(grid.D))
                for (const auto& j : axis(grid.J))
                    for (const auto& lp : axis(grid.Lp))
                        for (const auto& dmax : axis(grid.D_max))
                            rows.push_back(op_count(a, {m, d, j, lp, dmax}));
    return rows;
}

void write_complexity_csv(std::ostream& out, const std::vector<OpCountReport>& rows) {
    out << "algorithm,M,D,J,Lp,Dmax,mults,adds\r\n";
    auto v = [](const std::optional<std::int64_t>& x) { return x.value_or(0); };
    for (const auto& r : rows) {
        out << to_string(r.algorithm) << ',' << v(r.params.M) << ',' << v(r.params.D) << ','
            << v(r.params.J) << ',' << v(r.params.Lp) << ',' << v(r.params.D_max) << ','
            << r.multiplications << ',' << r.additions << "\r\n";
    }
}

}  // namespace jiomber
