#pragma once

// Cubic Hermite on one cell of width h, s in [0, 1].

namespace twlab::detail {

inline double hermite(double p0, double m0, double p1, double m1, double h, double s) {
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * p1 +
           (s3 - s2) * h * m1;
}

inline double hermite_d(double p0, double m0, double p1, double m1, double h, double s) {
    double s2 = s * s;
    return ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * h * m0 + (-6 * s2 + 6 * s) * p1 +
            (3 * s2 - 2 * s) * h * m1) /
           h;
}

}  // namespace twlab::detail

// Quintic Hermite from values, first and second derivatives at both ends.

namespace twlab::detail {

inline double quintic(double p0, double m0, double a0, double p1, double m1, double a1, double h,
                      double s) {
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    double h2 = h * h;
    return (1 - 10 * s3 + 15 * s4 - 6 * s5) * p0 + (s - 6 * s3 + 8 * s4 - 3 * s5) * h * m0 +
           0.5 * (s2 - 3 * s3 + 3 * s4 - s5) * h2 * a0 + (10 * s3 - 15 * s4 + 6 * s5) * p1 +
           (-4 * s3 + 7 * s4 - 3 * s5) * h * m1 + 0.5 * (s3 - 2 * s4 + s5) * h2 * a1;
}

inline double quintic_d(double p0, double m0, double a0, double p1, double m1, double a1, double h,
                        double s) {
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    double h2 = h * h;
    return ((-30 * s2 + 60 * s3 - 30 * s4) * p0 + (1 - 18 * s2 + 32 * s3 - 15 * s4) * h * m0 +
            0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4) * h2 * a0 + (30 * s2 - 60 * s3 + 30 * s4) * p1 +
            (-12 * s2 + 28 * s3 - 15 * s4) * h * m1 + 0.5 * (3 * s2 - 8 * s3 + 5 * s4) * h2 * a1) /
           h;
}

}  // namespace twlab::detail
