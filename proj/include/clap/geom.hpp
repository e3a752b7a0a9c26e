#pragma once

// Lie-group primitives: SO(3), SE(3) and the general linear group GL(3) used
// for homographies. Matrices are row-major doubles throughout.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include <array>

namespace clap {

using Mat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;
using Mat4 = Eigen::Matrix<double, 4, 4, Eigen::RowMajor>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Skew-symmetric matrix [v]x such that [v]x * w = v x w.
Mat3 hat(const Vec3& v);
/// Inverse of hat() on the antisymmetric part of m.
Vec3 vee(const Mat3& m);

/// Proper rotation matrix. Construction through from_matrix() validates
/// orthonormality; internal constructors trust their inputs.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    static Rotation identity() { return Rotation(); }
    /// Throws InvalidArgument unless R*R^T = I and det R = +1 within tol.
    static Rotation from_matrix(const Mat3& m, double tol = 1e-9);
    /// Trusted construction (no validation). Used by solvers whose output is
    /// orthonormal by construction.
    static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m); }

    const Mat3& matrix() const { return m_; }
    Rotation inverse() const { return Rotation(m_.transpose()); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_); }

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

/// Rigid transform x -> R x + t.
struct Pose {
    Rotation rotation;
    Vec3 translation = Vec3::Zero();

    static Pose identity() { return {}; }
    static Pose from_translation(const Vec3& t) { return {Rotation(), t}; }

    Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }
    Mat4 matrix() const;
    static Pose from_matrix(const Mat4& m);
};

Pose pose_compose(const Pose& a, const Pose& b);
Pose pose_inverse(const Pose& t);
inline Pose operator*(const Pose& a, const Pose& b) { return pose_compose(a, b); }

/// Tangent coordinates of SE(3): rho is the translational part, phi the
/// rotation vector (radians).
struct Twist {
    Vec3 rho = Vec3::Zero();
    Vec3 phi = Vec3::Zero();

    Vec6 vector() const;
    static Twist from_vector(const Vec6& v);
    double norm() const { return vector().norm(); }
};

Rotation so3_exp(const Vec3& omega);
/// Principal rotation vector, norm in [0, pi].
Vec3 so3_log(const Rotation& r);

/// Left Jacobian V(phi) of SO(3); couples the rotation into the translation of
/// se3_exp.
Mat3 so3_left_jacobian(const Vec3& phi);
Mat3 so3_left_jacobian_inverse(const Vec3& phi);

Pose se3_exp(const Twist& xi);
Twist se3_log(const Pose& t);

/// Principal matrix logarithm by inverse scaling and squaring. Throws
/// LogDomainError if M has a real eigenvalue <= 0 or |det M| < 1e-12.
Mat3 gl3_log(const Mat3& m);
Mat3 gl3_exp(const Mat3& a);

/// Real eigenvalues of a 3x3 matrix (roots of the characteristic cubic).
/// Returns 1 or 3 values; complex-conjugate pairs are omitted.
std::array<double, 3> real_eigenvalues(const Mat3& m, int& count);

enum class HomographyNorm {
    UnitLowerRight,  // H(2,2) == 1
    UnitDeterminant, // det H == 1
};

/// Projective 3x3 transform kept in one of two canonical scalings.
class Homography {
public:
    Homography() : m_(Mat3::Identity()), norm_(HomographyNorm::UnitLowerRight) {}

    const Mat3& matrix() const { return m_; }
    HomographyNorm norm() const { return norm_; }
    double operator()(int r, int c) const { return m_(r, c); }

    /// Maps a pixel through H (homogeneous divide included).
    Vec2 apply(const Vec2& p) const;
    Homography inverse() const;

    friend Homography normalize_homography(const Mat3& h, HomographyNorm mode);

private:
    Homography(const Mat3& m, HomographyNorm n) : m_(m), norm_(n) {}
    Mat3 m_;
    HomographyNorm norm_;
};

/// Throws DegenerateHomography when |det H| <= 1e-12, or when |H33| <= 1e-9 in
/// unit-lower-right mode.
Homography normalize_homography(const Mat3& h, HomographyNorm mode);
inline Homography normalize_homography(const Homography& h, HomographyNorm mode) {
    return normalize_homography(h.matrix(), mode);
}

}  // namespace clap
