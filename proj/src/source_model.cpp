#include "edt/source_model.hpp"

#include <limits>

namespace edt {

double SourceModel::pdf(double x) const {
  switch (kind_) {
    case SourceKind::GaussianStdNormal:
      return num::std_normal_pdf(x);
    case SourceKind::UniformSymmetricUnit:
      return (x >= -0.5 && x <= 0.5) ? 1.0 : 0.0;
  }
  return 0.0;
}

num::Interval SourceModel::support() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (kind_ == SourceKind::GaussianStdNormal) return {-inf, inf};
  return {-0.5, 0.5};
}

double SourceModel::second_moment() const {
  return kind_ == SourceKind::GaussianStdNormal ? 1.0 : 1.0 / 12.0;
}

const char* SourceModel::name() const {
  return kind_ == SourceKind::GaussianStdNormal ? "gaussian" : "uniform";
}

}  // namespace edt
