#ifndef CRMAP_AHLFORS_HPP
#define CRMAP_AHLFORS_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <crmap/models.hpp>

namespace crmap
{

// rho' o H = Q rho with Q in (z, w, zb, wb).
struct QFactor {
    Series q;
    int order = 0;
    bool positive = false;
    // Order to which rho' o H - Q rho vanishes.
    int certificate_order = 0;
};

// H as series in the source spec about a point of H5 whose local rho is the model rho.
QFactor compute_Q(const SeriesTuple &H, const HypersurfaceModel &target, int order);
QFactor compute_Q(const MapDef &H, int order, Field field = Field::exact, const HypersurfaceModel *target = nullptr);

// Q of H composed with the Heisenberg translation taking 0 to p.
QFactor compute_Q_at(const MapDef &H, const Point &p, int order = 4, const HypersurfaceModel *target = nullptr);

// h conj(h) with h = 2/(1 + sqrt(1 - 4w^2 - 4i z z^t)).
Series iota_q_closed_form(int order, Field field = Field::exact);

struct AhlforsMatrix {
    // Row-major; entry (a, b) is Z_a conj(Z_b) log Q for the frame Z_a = d/dz_a + 2i zb_a d/dw.
    std::array<Scalar, 4> m{Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
    Point point;
    std::string frame = "Z_a = d/dz_a + 2i zb_a d/dw";

    const Scalar &operator()(int a, int b) const
    {
        return m[static_cast<std::size_t>(2 * a + b)];
    }
    bool hermitian(double tol = 1e-12) const;
};

// At the origin of Q's coordinates.
AhlforsMatrix ahlfors_matrix(const QFactor &Q);
AhlforsMatrix ahlfors_matrix(const MapDef &H, const Point &p, int order = 4);
// Circle means of log Q along complex lines through p, extrapolated in the radius.
AhlforsMatrix ahlfors_matrix_numeric(const MapDef &H, const Point &p, double h = 0.02);

// Matrix in the frame Z'_a = sum_c M_ac Z_c.
AhlforsMatrix change_frame(const AhlforsMatrix &A, const std::array<std::complex<double>, 4> &M);

// Number of singular values >= tol * max(largest, 1).
int matrix_rank(const AhlforsMatrix &A, double tol = 1e-7);
std::vector<int> ahlfors_rank(const MapDef &H, const std::vector<Point> &points, double tol = 1e-7, int order = 4);

// H moved so that p and H(p) become the base points.
SeriesTuple germ_at(const MapDef &H, const Point &p, int order);

struct PluriharmonicReport {
    bool pass = false;
    int checked_order = 0;
    std::optional<int> violating_weight;
    std::string monomial;
    Scalar coefficient{0};
};

PluriharmonicReport pluriharmonic_test(const QFactor &Q, int order, double tol = 1e-10);

struct KePoint {
    Point point;
    double rho = 0;
    // Relative errors of det = rho'^(-m)/4 for the two readings.
    double log_error = 0, plain_error = 0;
};

struct KeReport {
    int m = 4;
    double tol = 0;
    std::uint64_t seed = 0;
    std::vector<KePoint> points;
    bool log_pass = false, plain_pass = false;
    // Name of the passing reading, empty unless exactly one passes.
    std::string interpretation;
    // The identity recomputed at the dilated points.
    double dilation = 0;
    bool dilation_pass = false;
};

// Both readings of rho_{jk} at a point of {rho' > 0}.
KePoint ke_evaluate(const Point &p, int m = 4);
std::vector<Point> sample_interior_points(std::size_t count, std::uint64_t seed);
KeReport ke_determinant_check(std::size_t count, std::uint64_t seed, double tol = 1e-8, int m = 4,
                              double dilation = 1.7);

} // namespace crmap

#endif
