#ifndef HYPISO_TEST_HELPERS_HPP
#define HYPISO_TEST_HELPERS_HPP

#include <vector>

#include "series.hpp"

namespace hypiso::testing {

inline TruncatedSeries ts_of(const Ctx& ctx, unsigned n,
                             const std::vector<long long>& coeffs) {
    TruncatedSeries s(ctx, n);
    for (size_t i = 0; i < coeffs.size() && i < n; ++i)
        s.set_coeff(static_cast<unsigned>(i), elem_from_int(ctx, coeffs[i]));
    return s;
}

inline SeriesPoly sp_of(const Ctx& ctx, unsigned n,
                        const std::vector<std::vector<long long>>& zc) {
    SeriesPoly r;
    for (const auto& row : zc) r.push_back(ts_of(ctx, n, row));
    return r;
}

inline SeriesPoly sp_one_width(const Ctx& ctx, unsigned n, unsigned width) {
    SeriesPoly r(ctx, n, width - 1);
    r[0] = ts_one(ctx, n);
    return r;
}

inline ZPoly zp_of(const Ctx& ctx, const std::vector<long long>& coeffs) {
    ZPoly r;
    for (long long v : coeffs) r.c.push_back(elem_from_int(ctx, v));
    zp_trim(r);
    return r;
}

} // namespace hypiso::testing

#endif
