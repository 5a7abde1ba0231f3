#pragma once

#include "nbreg/model.hpp"

namespace nbreg {

// Ames salmonella assay: revertant-colony counts at six quinoline dose
// levels, three plates each. Bundled for the worked example and the
// fixed-design simulation preset.
struct SalmonellaData {
  Eigen::VectorXi freq;
  Eigen::VectorXd dose;
};
SalmonellaData salmonella_data();

// Model used throughout for these data: log link, intercept, dose and
// log(dose + 10) columns, identity dispersion transform.
ModelSpec salmonella_model();

}  // namespace nbreg
