#pragma once

#include <Eigen/Dense>

#include "crepair/behavior.hpp"

namespace crepair {

enum class Activation { sigmoid, tanh, identity };

struct NeuralLayer {
    Eigen::MatrixXd weights;
    Vec bias;
    Activation act = Activation::identity;
};

/// Feedforward network behavior. The forward pass output is mapped by an
/// affine per-dimension scale/offset and clamped into the output box. The
/// default map is the identity clamp.
class NeuralBehavior final : public Behavior {
public:
    NeuralBehavior(BoxSpace input_space, BoxSpace output_space, std::vector<NeuralLayer> layers,
                   Vec out_scale, Vec out_offset);

    const std::vector<NeuralLayer>& layers() const { return layers_; }

    /// Weights document: {layers:[{w:[[...]], b:[...], act:"sigmoid"|"tanh"|"id"}],
    /// out_lo:[...], out_hi:[...]} with optional out_scale / out_offset.
    /// Layer shapes must compose and the last layer must match the output
    /// dimension; mismatches are reported at load time.
    static NeuralBehavior from_json(const nlohmann::json& j, const BoxSpace& input_space);
    nlohmann::ordered_json to_json() const;

protected:
    Vec eval_impl(const Vec& x) const override;

private:
    std::vector<NeuralLayer> layers_;
    Vec out_scale_;
    Vec out_offset_;
};

/// Forward pass plus the affine clamp into the output space.
Vec eval_neural(const NeuralBehavior& nb, const Vec& x);

} // namespace crepair
