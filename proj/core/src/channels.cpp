#include "sheafgauge/operators.hpp"

namespace sheafgauge {

ChannelSet channel_set(const CellSheaf& sheaf, const GroundingMorphism& grounding)
{
    if (grounding.mode != GroundingMode::CochainLevel) {
        throw ModeError("channel_set: grounding is vertex-level; convert it with to_cochain_level first");
    }
    if (grounding.cochain_map.cols() != sheaf.cochain_dim(1)) {
        throw DimensionError("channel_set: grounding has " + std::to_string(grounding.cochain_map.cols()) +
                             " columns, C^1 has dimension " + std::to_string(sheaf.cochain_dim(1)));
    }
    ChannelSet out;
    out.local_feasibility = laplacian(sheaf, 0);
    out.intrinsic = laplacian(sheaf, 1);
    out.grounding = grounding.cochain_map;
    const Matrix& eps = grounding.cochain_map;
    out.relative = SheafLaplacian{1, out.intrinsic.matrix + eps.transpose() * eps, Provenance::Relative,
                                  "L1+eps^T eps"};
    out.utilization = SheafLaplacian{1, eps * eps.transpose(), Provenance::Utilization, "eps eps^T"};
    return out;
}

} // namespace sheafgauge
