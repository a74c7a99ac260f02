#include <array>
#include <cmath>
#include <tuple>

#include "bdim/error.hpp"
#include "bdim/geometry.hpp"

namespace bdim {
namespace {

Mat3 planar_rotation(double angle) {
    Mat3 r = Mat3::Identity();
    const double c = std::cos(angle), s = std::sin(angle);
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    return r;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        raise(ErrorKind::invalid_input, std::string(what) + " must be positive and finite");
}

}  // namespace

Obstacle::Obstacle(ObstacleKind kind, int dim, const Vec3& center, const Vec3& axes,
                   const Mat3& frame, double angle)
    : kind_(kind), dim_(dim), center_(center), axes_(axes), frame_(frame), angle_(angle) {
    Vec3 sq = axes_.cwiseProduct(axes_);
    if (dim_ == 2) sq.z() = 0.0;
    shape_ = frame_ * sq.asDiagonal() * frame_.transpose();
}

Obstacle Obstacle::ball(const Vec3& center, double radius, int dim) {
    if (dim != 2 && dim != 3) raise(ErrorKind::invalid_input, "ball dimension must be 2 or 3");
    require_positive(radius, "ball radius");
    Vec3 c = center;
    if (dim == 2) c.z() = 0.0;
    return Obstacle(ObstacleKind::ball, dim, c, Vec3::Constant(radius), Mat3::Identity(), 0.0);
}

Obstacle Obstacle::ellipse(const Vec2& center, double a, double b, double angle) {
    require_positive(a, "ellipse semi-axis a");
    require_positive(b, "ellipse semi-axis b");
    if (a < b) raise(ErrorKind::invalid_input, "ellipse semi-axes must satisfy a >= b");
    if (!std::isfinite(angle)) raise(ErrorKind::invalid_input, "ellipse angle must be finite");
    return Obstacle(ObstacleKind::ellipse2d, 2, Vec3(center.x(), center.y(), 0.0), Vec3(a, b, b),
                    planar_rotation(angle), angle);
}

Obstacle Obstacle::ellipsoid(const Vec3& center, const Vec3& semi_axes, const Mat3& frame) {
    require_positive(semi_axes.x(), "ellipsoid semi-axis a");
    require_positive(semi_axes.y(), "ellipsoid semi-axis b");
    require_positive(semi_axes.z(), "ellipsoid semi-axis c");
    if (semi_axes.x() < semi_axes.y() || semi_axes.y() < semi_axes.z())
        raise(ErrorKind::invalid_input, "ellipsoid semi-axes must satisfy a >= b >= c");
    if ((frame.transpose() * frame - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        raise(ErrorKind::invalid_input, "ellipsoid frame must be orthonormal");
    return Obstacle(ObstacleKind::ellipsoid3d, 3, center, semi_axes, frame, 0.0);
}

Vec3 Obstacle::to_body(const Vec3& p) const {
    Vec3 y = frame_.transpose() * (p - center_);
    if (dim_ == 2) y.z() = 0.0;
    return y;
}

Vec3 Obstacle::from_body(const Vec3& y) const {
    Vec3 p = center_ + frame_ * y;
    if (dim_ == 2) p.z() = 0.0;
    return p;
}

double Obstacle::implicit(const Vec3& p) const {
    const Vec3 y = to_body(p);
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += (y[i] / axes_[i]) * (y[i] / axes_[i]);
    return s - 1.0;
}

double Obstacle::support(const Vec3& n) const {
    return n.dot(center_) + std::sqrt(std::max(0.0, n.dot(shape_ * n)));
}

Vec3 Obstacle::support_point(const Vec3& n) const {
    const Vec3 mn = shape_ * n;
    const double q = std::sqrt(std::max(0.0, n.dot(mn)));
    if (q == 0.0) raise(ErrorKind::invalid_input, "support point requested for a zero direction");
    return center_ + mn / q;
}

Vec3 Obstacle::boundary_point(double t) const {
    return from_body(Vec3(axes_.x() * std::cos(t), axes_.y() * std::sin(t), 0.0));
}

Vec3 Obstacle::boundary_point(double s, double t) const {
    const double ss = std::sin(s);
    return from_body(Vec3(axes_.x() * ss * std::cos(t), axes_.y() * ss * std::sin(t),
                          axes_.z() * std::cos(s)));
}

double Obstacle::min_curvature_bound() const {
    switch (kind_) {
    case ObstacleKind::ball: return 1.0 / axes_.x();
    case ObstacleKind::ellipse2d: return axes_.y() / (axes_.x() * axes_.x());
    case ObstacleKind::ellipsoid3d: return axes_.z() / (axes_.x() * axes_.x());
    }
    return 0.0;
}

double Obstacle::max_curvature_bound() const {
    switch (kind_) {
    case ObstacleKind::ball: return 1.0 / axes_.x();
    case ObstacleKind::ellipse2d: return axes_.x() / (axes_.y() * axes_.y());
    case ObstacleKind::ellipsoid3d: return axes_.x() / (axes_.z() * axes_.z());
    }
    return 0.0;
}

bool Obstacle::precedes(const Obstacle& other) const {
    auto key = [](const Obstacle& o) {
        std::array<double, 16> k{};
        k[0] = static_cast<double>(o.kind_);
        for (int i = 0; i < 3; ++i) k[1 + i] = o.center_[i];
        for (int i = 0; i < 3; ++i) k[4 + i] = o.axes_[i];
        for (int i = 0; i < 9; ++i) k[7 + i] = o.frame_(i / 3, i % 3);
        return k;
    };
    return key(*this) < key(other);
}

Billiard::Billiard(int dim, std::vector<Obstacle> obstacles, Tolerances tol)
    : dim_(dim), obstacles_(std::move(obstacles)), tol_(std::move(tol)) {
    if (dim_ != 2 && dim_ != 3) raise(ErrorKind::invalid_input, "billiard dimension must be 2 or 3");
    if (obstacles_.size() < 3) raise(ErrorKind::invalid_input, "a billiard needs at least 3 obstacles");
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
        if (obstacles_[i].dim() != dim_)
            raise(ErrorKind::invalid_input,
                  "obstacle " + std::to_string(i + 1) + " does not match the billiard dimension");
    }
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
        for (std::size_t j = i + 1; j < obstacles_.size(); ++j) {
            if (!(separation(obstacles_[i], obstacles_[j], tol_) > 0.0))
                raise(ErrorKind::invalid_input, "obstacles " + std::to_string(i + 1) + " and " +
                                                    std::to_string(j + 1) + " are not disjoint");
        }
    }
}

}  // namespace bdim
