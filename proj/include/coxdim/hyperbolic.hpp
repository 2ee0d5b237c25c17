#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace coxdim {

inline constexpr double kTol = 1e-9;

struct UpperHalfSpacePoint {
    double w1 = 0, w2 = 0, w3 = 1;
};

double dist_h2(std::complex<double> z, std::complex<double> w);
double dist_h3(const UpperHalfSpacePoint& p, const UpperHalfSpacePoint& q);
// Angle at a between the geodesics to b and c, from the hyperbolic law of cosines.
double angle_h3(const UpperHalfSpacePoint& a, const UpperHalfSpacePoint& b, const UpperHalfSpacePoint& c);

// Ideal tetrahedron with vertices (0,0), (1,0), (1/2, sqrt3/2), infinity.
// Faces: 1 = over the segment (0,0)-(1,0), 2 = over (0,0)-(1/2,sqrt3/2),
// 3 = over (1,0)-(1/2,sqrt3/2), 4 = the hemisphere through the three finite vertices.
struct TruncatedBlockGeometry {
    UpperHalfSpacePoint x0;                    // equidistant from the four faces
    std::array<UpperHalfSpacePoint, 4> xi;     // incenters of the faces
    UpperHalfSpacePoint x12;                   // foot of x1 on the edge over (0,0)
    std::array<double, 6> dihedral{};          // face pairs 12,13,14,23,24,34
    double face4_height = 0;                   // top of the hemisphere face
    double y0 = 1.5;
};

double face_distance(const UpperHalfSpacePoint& p, int face);
TruncatedBlockGeometry truncated_block(double y0 = 1.5);

struct KiteLeg {
    double law_of_cosines;
    double coordinates;
    double angle_x0;    // angle at x0 between x1 and x2
    double angle_x12;   // angle at x12 between x1 and x0
    double angle_x1;    // angle at x1 between x0 and x12
};

KiteLeg kite_leg_length();

double boundary_angle(double h, double D);
// Angle at ih of the finite triangle (ih, D+ih, it) with 0 < t < h.
double boundary_angle_triangle(double h, double D, double t);

enum class CapKind { TriangleSqrt3 = 1, Hexagon1 = 2, Triangle1 = 3 };
double cap_height(CapKind kind, double y0);
// Same height from the circumradius of the Euclidean base polygon.
double cap_height_circumradius(CapKind kind, double y0);
double cap_side(CapKind kind);
double cap_alpha(CapKind kind);

double prism_gap(double y0);

double link_sigma(double theta, double alpha);
// Third side of the isosceles spherical triangle built from unit vectors.
double link_sigma_vectors(double theta, double alpha);

struct CapVertexCheck {
    CapKind kind;
    int caps;         // number of caps around the vertex
    int copies;       // copies of the isosceles triangle in the link
    double theta;
    double sigma;
    double loop;      // copies * sigma
    bool pass;        // loop > 2 pi
};

// Link condition at every cap vertex type of the triangle group (p,q,r), p <= q <= r.
std::vector<CapVertexCheck> cat1_link_test(int p, int q, int r, double y0);
CapKind cap_kind_for(int p, int q, int r);

struct Y0Case {
    CapKind kind;
    double closed_form;
    double bisection;
    double source_value;  // decimal stated with the appendix algebra
};

struct Y0Feasibility {
    std::array<Y0Case, 3> cases;
    double minimum;  // max over cases of the closed forms
};

Y0Feasibility solve_y0();

struct LmFlagCertificate {
    double ell0;
    bool ell0_exceeds_half_pi;
    double triangle_angle;
    bool triangle_angle_ok;
    double gram_det;
    bool gram_singular;
    bool pass;
};

LmFlagCertificate lm_flag_check(int m);

}  // namespace coxdim
