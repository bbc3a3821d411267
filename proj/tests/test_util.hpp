#ifndef CRMAP_TEST_UTIL_HPP
#define CRMAP_TEST_UTIL_HPP

#include <random>

#include <crmap/series.hpp>

namespace crmap_test
{

using namespace crmap;

inline Scalar small_gaussian(std::mt19937_64 &rng, int lim = 3)
{
    std::uniform_int_distribution<int> d(-lim, lim);
    std::uniform_int_distribution<int> q(1, 3);
    return Scalar(mpq_class(d(rng), q(rng)), mpq_class(d(rng), q(rng)));
}

inline Series random_series(std::mt19937_64 &rng, const VarSpecPtr &spec, int order, int nterms, bool unit = false)
{
    Series s(spec, order);
    std::uniform_int_distribution<std::size_t> var(0, spec->size() - 1);
    std::uniform_int_distribution<int> len(1, 3);
    for (int t = 0; t < nterms; ++t) {
        Monomial m;
        int l = len(rng);
        for (int j = 0; j < l; ++j) {
            m.e[var(rng)] += 1;
        }
        s.add_term(m, small_gaussian(rng));
    }
    s.add_term(Monomial{}, -s.constant_term());
    if (unit) {
        s = s + Scalar(1);
    }
    return s;
}

} // namespace crmap_test

#endif
