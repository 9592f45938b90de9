#pragma once
#include <stdexcept>
#include <string>

namespace wv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define WV_ERROR(Name)                         \
  struct Name : Error {                        \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

WV_ERROR(InvalidSpin);
WV_ERROR(TruncationError);
WV_ERROR(DimError);
WV_ERROR(NotHermitian);
WV_ERROR(GridCoverageError);
WV_ERROR(ResolutionError);
WV_ERROR(RepresentationError);
WV_ERROR(OrthogonalPostSelection);
WV_ERROR(BasisError);
WV_ERROR(UndefinedABL);
WV_ERROR(FallOffViolation);
WV_ERROR(VarianceUndefined);
WV_ERROR(MultimodalPosterior);
WV_ERROR(EigenstateDegenerate);
WV_ERROR(PartitionError);
WV_ERROR(MultipleExtremals);
WV_ERROR(StarvedSampler);
WV_ERROR(ConfigError);
WV_ERROR(IoError);

#undef WV_ERROR

}  // namespace wv
