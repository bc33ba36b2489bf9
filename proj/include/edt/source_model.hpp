#pragma once

#include "edt/numerics.hpp"

namespace edt {

enum class SourceKind { GaussianStdNormal, UniformSymmetricUnit };

/// Scalar source distribution: standard Gaussian or Uniform[-1/2, 1/2].
class SourceModel {
 public:
  static SourceModel gaussian() { return SourceModel(SourceKind::GaussianStdNormal); }
  static SourceModel uniform() { return SourceModel(SourceKind::UniformSymmetricUnit); }

  SourceKind kind() const noexcept { return kind_; }
  double pdf(double x) const;
  num::Interval support() const;
  double second_moment() const;
  const char* name() const;

 private:
  explicit SourceModel(SourceKind kind) : kind_(kind) {}
  SourceKind kind_;
};

}  // namespace edt
