#include "coxdim/hyperbolic.hpp"

#include "coxdim/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace coxdim {

namespace {

using std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

struct Vec2 {
    double x, y;
};

// Finite ideal vertices of the tetrahedron.
const std::array<Vec2, 3> kIdeal{{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}}};
// Vertical faces 1..3 as pairs of finite ideal vertices; the remaining vertex is opposite.
const std::array<std::array<int, 3>, 3> kVerticalFace{{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
const Vec2 kSphereCenter{0.5, std::sqrt(3.0) / 6};
const double kSphereRadius = 1 / std::sqrt(3.0);

double line_distance(Vec2 a, Vec2 b, double px, double py) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    return std::fabs(dx * (py - a.y) - dy * (px - a.x)) / std::hypot(dx, dy);
}

template <int N>
Eigen::Matrix<double, N, 1> newton(const std::function<Eigen::Matrix<double, N, 1>(const Eigen::Matrix<double, N, 1>&)>& F,
                                   Eigen::Matrix<double, N, 1> x) {
    for (int it = 0; it < 100; ++it) {
        auto f = F(x);
        if (f.norm() < 1e-15) break;
        Eigen::Matrix<double, N, N> J;
        for (int k = 0; k < N; ++k) {
            const double h = 1e-7 * std::max(1.0, std::fabs(x[k]));
            auto xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            J.col(k) = (F(xp) - F(xm)) / (2 * h);
        }
        x -= J.fullPivLu().solve(f);
    }
    return x;
}

// Distance in H^2 (upper half plane) from z to the vertical geodesic over a.
double h2_to_vertical(double x, double y, double a) { return std::asinh(std::fabs(x - a) / y); }
// Distance to the semicircle with center c on the real axis and radius rho.
double h2_to_circle(double x, double y, double c, double rho) {
    return std::asinh(std::fabs((x - c) * (x - c) + y * y - rho * rho) / (2 * rho * y));
}

}  // namespace

double dist_h2(std::complex<double> z, std::complex<double> w) {
    if (z.imag() <= 0 || w.imag() <= 0) throw DomainError("dist_h2: points must have positive imaginary part");
    return 2 * std::asinh(std::abs(z - w) / (2 * std::sqrt(z.imag() * w.imag())));
}

double dist_h3(const UpperHalfSpacePoint& p, const UpperHalfSpacePoint& q) {
    if (p.w3 <= 0 || q.w3 <= 0) throw DomainError("dist_h3: heights must be positive");
    const double e = std::sqrt((p.w1 - q.w1) * (p.w1 - q.w1) + (p.w2 - q.w2) * (p.w2 - q.w2) +
                               (p.w3 - q.w3) * (p.w3 - q.w3));
    return 2 * std::asinh(e / (2 * std::sqrt(p.w3 * q.w3)));
}

double angle_h3(const UpperHalfSpacePoint& a, const UpperHalfSpacePoint& b, const UpperHalfSpacePoint& c) {
    const double ab = dist_h3(a, b), ac = dist_h3(a, c), bc = dist_h3(b, c);
    double cosA = (std::cosh(ab) * std::cosh(ac) - std::cosh(bc)) / (std::sinh(ab) * std::sinh(ac));
    return std::acos(std::clamp(cosA, -1.0, 1.0));
}

double face_distance(const UpperHalfSpacePoint& p, int face) {
    if (face >= 1 && face <= 3) {
        const auto& f = kVerticalFace[face - 1];
        return std::asinh(line_distance(kIdeal[f[0]], kIdeal[f[1]], p.w1, p.w2) / p.w3);
    }
    if (face == 4) {
        const double dx = p.w1 - kSphereCenter.x, dy = p.w2 - kSphereCenter.y;
        const double e2 = dx * dx + dy * dy + p.w3 * p.w3;
        return std::asinh(std::fabs(e2 - kSphereRadius * kSphereRadius) / (2 * kSphereRadius * p.w3));
    }
    throw InputError("face index must be 1..4");
}

TruncatedBlockGeometry truncated_block(double y0) {
    TruncatedBlockGeometry g;
    g.y0 = y0;
    g.face4_height = kSphereRadius;
    if (y0 <= g.face4_height)
        throw DomainError("truncated_block: horoball height must exceed the face height 1/sqrt(3)");

    using V3 = Eigen::Matrix<double, 3, 1>;
    std::function<V3(const V3&)> F = [](const V3& x) {
        UpperHalfSpacePoint p{x[0], x[1], x[2]};
        const double d4 = face_distance(p, 4);
        return V3(face_distance(p, 1) - d4, face_distance(p, 2) - d4, face_distance(p, 3) - d4);
    };
    V3 s = newton<3>(F, V3(0.45, 0.3, 0.8));
    g.x0 = {s[0], s[1], s[2]};

    // Incenters of the vertical faces, solved in the face's own coordinates (t along the base, height).
    using V2 = Eigen::Matrix<double, 2, 1>;
    for (int f = 0; f < 3; ++f) {
        Vec2 a = kIdeal[kVerticalFace[f][0]], b = kIdeal[kVerticalFace[f][1]];
        std::function<V2(const V2&)> G = [](const V2& x) {
            const double d0 = h2_to_vertical(x[0], x[1], 0.0);
            const double d1 = h2_to_vertical(x[0], x[1], 1.0);
            const double d2 = h2_to_circle(x[0], x[1], 0.5, 0.5);
            return V2(d0 - d2, d1 - d2);
        };
        V2 t = newton<2>(G, V2(0.4, 0.7));
        g.xi[f] = {a.x + t[0] * (b.x - a.x), a.y + t[0] * (b.y - a.y), t[1]};
    }
    g.xi[3] = {kSphereCenter.x, kSphereCenter.y, kSphereRadius};

    // Edge E(12) is the vertical line over (0,0); geodesics orthogonal to it are
    // arcs of spheres centred at (0,0,0).
    const auto& x1 = g.xi[0];
    g.x12 = {0.0, 0.0, std::sqrt(x1.w1 * x1.w1 + x1.w2 * x1.w2 + x1.w3 * x1.w3)};

    // Interior dihedral angles from outward normals at a common point.
    auto outward_vertical = [](int f) {
        const auto& ids = kVerticalFace[f];
        Vec2 a = kIdeal[ids[0]], b = kIdeal[ids[1]], c = kIdeal[ids[2]];
        Eigen::Vector3d n(-(b.y - a.y), b.x - a.x, 0.0);
        n.normalize();
        if (n.dot(Eigen::Vector3d(c.x - a.x, c.y - a.y, 0)) > 0) n = -n;
        return n;
    };
    int k = 0;
    for (int f1 = 0; f1 < 4; ++f1)
        for (int f2 = f1 + 1; f2 < 4; ++f2) {
            Eigen::Vector3d n1 = outward_vertical(f1), n2;
            if (f2 < 3) {
                n2 = outward_vertical(f2);
            } else {
                const auto& ids = kVerticalFace[f1];
                Vec2 a = kIdeal[ids[0]], b = kIdeal[ids[1]];
                Eigen::Vector3d p((a.x + b.x) / 2, (a.y + b.y) / 2, 0.0);
                const double horiz = std::hypot(p.x() - kSphereCenter.x, p.y() - kSphereCenter.y);
                p.z() = std::sqrt(kSphereRadius * kSphereRadius - horiz * horiz);
                n2 = -(p - Eigen::Vector3d(kSphereCenter.x, kSphereCenter.y, 0)).normalized();
            }
            g.dihedral[k++] = pi - std::acos(std::clamp(n1.dot(n2), -1.0, 1.0));
        }
    return g;
}

KiteLeg kite_leg_length() {
    KiteLeg k{};
    const double theta = std::acos(-1.0 / 3.0);
    // Right angle at x_i, pi/6 at x_ij, theta/2 at x0; the leg is opposite pi/6.
    const double A = pi / 6, B = theta / 2, C = pi / 2;
    k.law_of_cosines = std::acosh((std::cos(A) + std::cos(B) * std::cos(C)) / (std::sin(B) * std::sin(C)));
    auto g = truncated_block(1.5);
    k.coordinates = dist_h3(g.x0, g.xi[0]);
    k.angle_x0 = angle_h3(g.x0, g.xi[0], g.xi[1]);
    k.angle_x12 = angle_h3(g.x12, g.xi[0], g.x0);
    k.angle_x1 = angle_h3(g.xi[0], g.x0, g.x12);
    return k;
}

double boundary_angle(double h, double D) {
    if (h <= 0 || D <= 0) throw DomainError("boundary_angle: h and D must be positive");
    return pi - std::atan(2 * h / D);
}

double boundary_angle_triangle(double h, double D, double t) {
    if (h <= 0 || D <= 0 || t <= 0 || t >= h) throw DomainError("boundary_angle_triangle: need 0 < t < h, D > 0");
    const std::complex<double> a(0, h), b(D, h), c(0, t);
    const double ab = dist_h2(a, b), ac = dist_h2(a, c), bc = dist_h2(b, c);
    const double cosA = (std::cosh(ab) * std::cosh(ac) - std::cosh(bc)) / (std::sinh(ab) * std::sinh(ac));
    return std::acos(std::clamp(cosA, -1.0, 1.0));
}

double cap_side(CapKind kind) {
    switch (kind) {
        case CapKind::TriangleSqrt3: return kSqrt3;
        case CapKind::Hexagon1: return 1.0;
        case CapKind::Triangle1: return 1.0;
    }
    throw InputError("invalid cap kind");
}

double cap_alpha(CapKind kind) { return kind == CapKind::Hexagon1 ? 2 * pi / 3 : pi / 3; }

double cap_height(CapKind kind, double y0) {
    if (y0 <= 0) throw DomainError("cap_height: y0 must be positive");
    switch (kind) {
        case CapKind::TriangleSqrt3: return std::sqrt(y0 * y0 + 1);
        case CapKind::Hexagon1: return std::sqrt(y0 * y0 + 1.0 / 3);
        case CapKind::Triangle1: return std::sqrt(y0 * y0 + 1);
    }
    throw InputError("invalid cap kind");
}

double cap_height_circumradius(CapKind kind, double y0) {
    if (y0 <= 0) throw DomainError("cap_height: y0 must be positive");
    const int sides = kind == CapKind::Hexagon1 ? 6 : 3;
    const double R = cap_side(kind) / (2 * std::sin(pi / sides));
    return std::hypot(y0, R);
}

double prism_gap(double y0) {
    if (y0 <= 0) throw DomainError("prism_gap: y0 must be positive");
    return 4 * std::asinh(1 / (4 * kSqrt3 * std::sqrt(y0 * y0 + 1)));
}

double link_sigma(double theta, double alpha) {
    if (!(theta >= pi / 2 && theta < pi)) throw DomainError("link_sigma: theta must lie in [pi/2, pi)");
    if (!(alpha > 0 && alpha <= 2 * pi / 3 + 1e-15)) throw DomainError("link_sigma: alpha must lie in (0, 2pi/3]");
    const double c = std::cos(theta), s = std::sin(theta);
    return std::acos(std::clamp(c * c + std::cos(alpha) * s * s, -1.0, 1.0));
}

double link_sigma_vectors(double theta, double alpha) {
    // Apex at the north pole; the two equal sides leave it at angle alpha.
    Eigen::Vector3d v1(std::sin(theta), 0, std::cos(theta));
    Eigen::Vector3d v2(std::sin(theta) * std::cos(alpha), std::sin(theta) * std::sin(alpha), std::cos(theta));
    return std::atan2(v1.cross(v2).norm(), v1.dot(v2));
}

CapKind cap_kind_for(int p, int q, int r) {
    std::array<int, 3> t{p, q, r};
    std::sort(t.begin(), t.end());
    if (t[0] < 3) throw InputError("labels must be >= 3");
    if (t[2] == 3) throw NotApplicableError("(3,3,3) is Euclidean: horoball, no caps");
    if (t[1] == 3) return CapKind::TriangleSqrt3;
    if (t[0] == 3) return CapKind::Hexagon1;
    return CapKind::Triangle1;
}

std::vector<CapVertexCheck> cat1_link_test(int p, int q, int r, double y0) {
    std::array<int, 3> t{p, q, r};
    std::sort(t.begin(), t.end());
    const CapKind kind = cap_kind_for(t[0], t[1], t[2]);
    if (y0 <= 0) throw DomainError("cat1_link_test: y0 must be positive");
    const double theta = boundary_angle(y0, cap_side(kind));
    const double sigma = link_sigma(theta, cap_alpha(kind));
    std::vector<int> counts;
    switch (kind) {
        case CapKind::TriangleSqrt3: counts = {2 * t[2]}; break;
        case CapKind::Hexagon1: counts = {t[1], t[2]}; break;
        case CapKind::Triangle1: counts = {2 * t[0], 2 * t[1], 2 * t[2]}; break;
    }
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
    std::vector<CapVertexCheck> out;
    for (int n : counts) {
        const double loop = n * sigma;
        out.push_back({kind, n, n, theta, sigma, loop, loop > 2 * pi});
    }
    return out;
}

Y0Feasibility solve_y0() {
    Y0Feasibility f{};
    const double r4 = std::pow(2.0, 0.25);
    struct Spec {
        CapKind kind;
        std::array<int, 3> worst;
        double closed;
        double stated;
    };
    const std::array<Spec, 3> specs{{{CapKind::TriangleSqrt3, {3, 3, 4}, kSqrt3 * r4 / 2, 1.0298},
                                     {CapKind::Hexagon1, {3, 4, 4}, std::sqrt(2.0) / 2, 0.86},
                                     {CapKind::Triangle1, {4, 4, 4}, r4 / 2, 0.5946}}};
    for (int i = 0; i < 3; ++i) {
        const auto& s = specs[i];
        auto passes = [&](double y) {
            for (const auto& c : cat1_link_test(s.worst[0], s.worst[1], s.worst[2], y))
                if (!c.pass) return false;
            return true;
        };
        double lo = 1e-3, hi = 10.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            const double mid = 0.5 * (lo + hi);
            (passes(mid) ? hi : lo) = mid;
        }
        f.cases[i] = {s.kind, s.closed, hi, s.stated};
    }
    f.minimum = std::max({f.cases[0].closed_form, f.cases[1].closed_form, f.cases[2].closed_form});
    return f;
}

LmFlagCertificate lm_flag_check(int m) {
    if (m < 3) throw DomainError("lm_flag_check: need m >= 3");
    LmFlagCertificate c{};
    c.ell0 = std::acos(-1.0 / 3.0);
    c.ell0_exceeds_half_pi = c.ell0 > pi / 2;
    const double cl = std::cos(c.ell0), sl = std::sin(c.ell0);
    c.triangle_angle = std::acos(std::clamp((cl - cl * cl) / (sl * sl), -1.0, 1.0));
    c.triangle_angle_ok = std::fabs(c.triangle_angle - 2 * pi / 3) < kTol;
    Eigen::Matrix4d G = Eigen::Matrix4d::Constant(cl);
    G.diagonal().setOnes();
    c.gram_det = G.determinant();
    c.gram_singular = std::fabs(c.gram_det) < kTol;
    c.pass = c.ell0_exceeds_half_pi && c.triangle_angle_ok && c.gram_singular;
    return c;
}

}  // namespace coxdim
