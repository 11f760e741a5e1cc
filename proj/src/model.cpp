#include "nutaxis/model.hpp"

#include "nutaxis/errors.hpp"

namespace nutaxis {

void ModelParams::validate() const {
    if (!(D_u > 0.0)) throw InvalidArgument("D_u must be positive");
    if (!(D_w > 0.0)) throw InvalidArgument("D_w must be positive");
    if (!(chi >= 0.0)) throw InvalidArgument("chi must be nonnegative");
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0) || !(delta >= 0.0))
        throw InvalidArgument("reaction rates must be nonnegative");
    if (!(eps_reg >= 0.0)) throw InvalidArgument("eps_reg must be nonnegative");
}

void ModelParams::validate_strict() const {
    validate();
    if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0) || !(delta > 0.0))
        throw InvalidArgument("alpha, beta, gamma, delta must be positive");
}

}  // namespace nutaxis
