#include "clap/geom.hpp"

#include "clap/error.hpp"

#include <algorithm>
#include <cmath>

namespace clap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Coefficients of the SO(3) series, each evaluated without cancellation.
//   a = sin t / t
//   b = (1 - cos t) / t^2
//   c = (t - sin t) / t^3
//   d = (1 - (t/2) cot(t/2)) / t^2   (inverse left Jacobian)
struct So3Coeffs {
    double a, b, c, d;
};

So3Coeffs so3_coeffs(double theta) {
    const double t2 = theta * theta;
    So3Coeffs k{};
    if (theta < 1e-8) {
        k.a = 1.0 - t2 / 6.0;
        k.b = 0.5 - t2 / 24.0;
    } else {
        k.a = std::sin(theta) / theta;
        const double h = std::sin(0.5 * theta) / (0.5 * theta);
        k.b = 0.5 * h * h;
    }
    if (theta < 1e-2) {
        const double t4 = t2 * t2;
        k.c = 1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0 - t4 * t2 / 362880.0;
        k.d = 1.0 / 12.0 + t2 / 720.0 + t4 / 30240.0 + t4 * t2 / 1209600.0;
    } else {
        k.c = (theta - std::sin(theta)) / (t2 * theta);
        const double half = 0.5 * theta;
        k.d = (1.0 - half * std::cos(half) / std::sin(half)) / t2;
    }
    return k;
}

Mat3 inverse_checked(const Mat3& m) {
    Eigen::FullPivLU<Mat3> lu(m);
    if (!lu.isInvertible()) throw LogDomainError("gl3_log: singular iterate");
    return lu.inverse();
}

// Denman-Beavers iteration for the principal square root.
Mat3 sqrtm(const Mat3& a) {
    Mat3 y = a;
    Mat3 z = Mat3::Identity();
    for (int it = 0; it < 100; ++it) {
        const Mat3 yi = inverse_checked(y);
        const Mat3 zi = inverse_checked(z);
        const Mat3 y_next = 0.5 * (y + zi);
        const Mat3 z_next = 0.5 * (z + yi);
        const double step = (y_next - y).norm();
        y = y_next;
        z = z_next;
        if (step <= 1e-15 * y.norm()) return y;
    }
    throw LogDomainError("gl3_log: square root iteration did not converge");
}

}  // namespace

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

Vec3 vee(const Mat3& m) {
    return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
    if (!m.allFinite()) throw InvalidArgument("rotation: non-finite entries");
    if ((m * m.transpose() - Mat3::Identity()).norm() > tol || std::abs(m.determinant() - 1.0) > tol)
        throw InvalidArgument("rotation: matrix is not a proper orthonormal matrix");
    return Rotation(m);
}

Mat4 Pose::matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation.matrix();
    m.topRightCorner<3, 1>() = translation;
    return m;
}

Pose Pose::from_matrix(const Mat4& m) {
    return {Rotation::from_matrix(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>()};
}

Pose pose_compose(const Pose& a, const Pose& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose pose_inverse(const Pose& t) {
    const Rotation rt = t.rotation.inverse();
    return {rt, -(rt * t.translation)};
}

Vec6 Twist::vector() const {
    Vec6 v;
    v << rho, phi;
    return v;
}

Twist Twist::from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

Rotation so3_exp(const Vec3& omega) {
    const double theta = omega.norm();
    const So3Coeffs k = so3_coeffs(theta);
    const Mat3 w = hat(omega);
    return Rotation::from_matrix_unchecked(Mat3::Identity() + k.a * w + k.b * w * w);
}

Vec3 so3_log(const Rotation& r) {
    const Mat3& m = r.matrix();
    const double tr = m.trace();
    const double c = std::clamp(0.5 * (tr - 1.0), -1.0, 1.0);
    const Vec3 w = vee(m);  // sin(theta) * axis
    const double s = w.norm();
    const double theta = std::atan2(s, c);

    if (tr < -1.0 + 1e-6) {
        // Near pi the antisymmetric part vanishes; recover the axis from the
        // symmetric part (1 - cos) * n n^T instead.
        const Mat3 b = 0.5 * (m + m.transpose()) - c * Mat3::Identity();
        int k = 0;
        b.diagonal().maxCoeff(&k);
        Vec3 n = b.col(k) / std::sqrt(std::max(b(k, k), 1e-300));
        n.normalize();
        int j = 0;
        w.cwiseAbs().maxCoeff(&j);
        if (w[j] != 0.0 ? (n[j] * w[j] < 0.0) : (n[k] < 0.0)) n = -n;
        return theta * n;
    }
    if (theta < 1e-8) return w * (1.0 + theta * theta / 6.0);
    return w * (theta / s);
}

Mat3 so3_left_jacobian(const Vec3& phi) {
    const So3Coeffs k = so3_coeffs(phi.norm());
    const Mat3 w = hat(phi);
    return Mat3::Identity() + k.b * w + k.c * w * w;
}

Mat3 so3_left_jacobian_inverse(const Vec3& phi) {
    const So3Coeffs k = so3_coeffs(phi.norm());
    const Mat3 w = hat(phi);
    return Mat3::Identity() - 0.5 * w + k.d * w * w;
}

Pose se3_exp(const Twist& xi) {
    return {so3_exp(xi.phi), so3_left_jacobian(xi.phi) * xi.rho};
}

Twist se3_log(const Pose& t) {
    const Vec3 phi = so3_log(t.rotation);
    return {so3_left_jacobian_inverse(phi) * t.translation, phi};
}

std::array<double, 3> real_eigenvalues(const Mat3& m, int& count) {
    // lambda^3 + a lambda^2 + b lambda + c
    const double a = -m.trace();
    const double b = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                     m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const double c = -m.determinant();
    const double q = (a * a - 3.0 * b) / 9.0;
    const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    std::array<double, 3> roots{};
    if (r * r < q * q * q) {
        const double th = std::acos(std::clamp(r / std::sqrt(q * q * q), -1.0, 1.0));
        const double sq = -2.0 * std::sqrt(q);
        roots = {sq * std::cos(th / 3.0) - a / 3.0, sq * std::cos((th + 2.0 * kPi) / 3.0) - a / 3.0,
                 sq * std::cos((th - 2.0 * kPi) / 3.0) - a / 3.0};
        count = 3;
    } else {
        const double big = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q * q * q)), r);
        const double small = big != 0.0 ? q / big : 0.0;
        roots[0] = big + small - a / 3.0;
        count = 1;
    }
    // One Newton polish per root, kept only if it lowers the residual; near a
    // multiple root the derivative vanishes and the step is garbage.
    const auto poly = [&](double x) { return ((x + a) * x + b) * x + c; };
    for (int i = 0; i < count; ++i) {
        const double x = roots[i];
        const double f = poly(x);
        const double df = (3.0 * x + 2.0 * a) * x + b;
        if (df == 0.0) continue;
        const double y = x - f / df;
        if (std::isfinite(y) && std::abs(poly(y)) < std::abs(f)) roots[i] = y;
    }
    return roots;
}

Mat3 gl3_log(const Mat3& m) {
    if (!m.allFinite()) throw LogDomainError("gl3_log: non-finite matrix");
    const double det = m.determinant();
    if (std::abs(det) < 1e-12) throw LogDomainError("gl3_log: matrix is (near) singular");
    int n_real = 0;
    const auto ev = real_eigenvalues(m, n_real);
    const double scale = std::max(m.norm(), 1.0);
    for (int i = 0; i < n_real; ++i)
        if (ev[i] <= 1e-14 * scale) throw LogDomainError("gl3_log: eigenvalue on the closed negative real axis");

    Mat3 x = m;
    int squarings = 0;
    while ((x - Mat3::Identity()).norm() > 0.25) {
        x = sqrtm(x);
        if (++squarings > 64) throw LogDomainError("gl3_log: too many square roots");
    }
    // log X = 2 atanh(Z), Z = (X - I)(X + I)^-1
    const Mat3 z = (x - Mat3::Identity()) * (x + Mat3::Identity()).inverse();
    const Mat3 z2 = z * z;
    Mat3 power = z;
    Mat3 sum = z;
    for (int k = 3; k < 200; k += 2) {
        power = power * z2;
        const Mat3 term = power / static_cast<double>(k);
        sum += term;
        if (term.norm() <= 1e-18 * std::max(sum.norm(), 1e-300)) break;
    }
    return std::ldexp(2.0, squarings) * sum;
}

Mat3 gl3_exp(const Mat3& a) {
    const double norm = a.norm();
    int squarings = 0;
    if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    const Mat3 b = std::ldexp(1.0, -squarings) * a;
    Mat3 term = Mat3::Identity();
    Mat3 sum = Mat3::Identity();
    for (int k = 1; k < 40; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
        if (term.norm() <= 1e-18 * sum.norm()) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

Vec2 Homography::apply(const Vec2& p) const {
    const Vec3 h = m_ * Vec3(p.x(), p.y(), 1.0);
    return {h.x() / h.z(), h.y() / h.z()};
}

Homography Homography::inverse() const { return normalize_homography(Mat3(m_.inverse()), norm_); }

Homography normalize_homography(const Mat3& h, HomographyNorm mode) {
    if (!h.allFinite()) throw DegenerateHomography("homography has non-finite entries");
    const double fro = h.norm();
    if (fro == 0.0) throw DegenerateHomography("homography is zero");
    // Degeneracy is judged on the Frobenius-scaled matrix so the test is
    // invariant to the projective scale.
    const Mat3 unit = h / fro;
    if (!(std::abs(unit.determinant()) > 1e-12)) throw DegenerateHomography("homography is singular");

    if (mode == HomographyNorm::UnitLowerRight) {
        if (!(std::abs(unit(2, 2)) > 1e-9)) throw DegenerateHomography("homography has H33 ~ 0");
        Mat3 m = unit / unit(2, 2);
        m(2, 2) = 1.0;
        return {m, mode};
    }
    const double det = unit.determinant();
    return {Mat3(unit / std::cbrt(det)), mode};
}

}  // namespace clap
