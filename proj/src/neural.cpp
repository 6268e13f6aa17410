#include "crepair/neural.hpp"

#include <cmath>
#include <string>

namespace crepair {

namespace {

Vec apply_activation(Activation act, Vec z) {
    switch (act) {
        case Activation::sigmoid:
            return (1.0 / (1.0 + (-z.array()).exp())).matrix();
        case Activation::tanh:
            return z.array().tanh().matrix();
        case Activation::identity:
            return z;
    }
    return z;
}

Activation activation_from_string(const std::string& s) {
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "tanh") return Activation::tanh;
    if (s == "id") return Activation::identity;
    throw IoError("unknown activation '" + s + "' (expected sigmoid, tanh or id)");
}

const char* activation_to_string(Activation a) {
    switch (a) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::identity: return "id";
    }
    return "id";
}

} // namespace

NeuralBehavior::NeuralBehavior(BoxSpace input_space, BoxSpace output_space,
                               std::vector<NeuralLayer> layers, Vec out_scale, Vec out_offset)
    : Behavior(std::move(input_space), std::move(output_space), BehaviorKind::neural),
      layers_(std::move(layers)), out_scale_(std::move(out_scale)),
      out_offset_(std::move(out_offset)) {
    if (layers_.empty()) throw IoError("network requires at least one layer");
    Eigen::Index cols = this->input_space().dims();
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const NeuralLayer& layer = layers_[l];
        if (layer.weights.cols() != cols) {
            throw IoError("layer " + std::to_string(l) + " expects input of size " +
                          std::to_string(layer.weights.cols()) + ", got " + std::to_string(cols));
        }
        if (layer.bias.size() != layer.weights.rows()) {
            throw IoError("layer " + std::to_string(l) + " bias size does not match row count");
        }
        cols = layer.weights.rows();
    }
    if (cols != this->output_space().dims()) {
        throw IoError("final layer width " + std::to_string(cols) +
                      " does not match output dimension " +
                      std::to_string(this->output_space().dims()));
    }
    if (out_scale_.size() != cols || out_offset_.size() != cols) {
        throw IoError("out_scale/out_offset must match the output dimension");
    }
}

Vec NeuralBehavior::eval_impl(const Vec& x) const {
    Vec h = x;
    for (const NeuralLayer& layer : layers_) {
        h = apply_activation(layer.act, layer.weights * h + layer.bias);
    }
    return (out_scale_.array() * h.array() + out_offset_.array()).matrix();
}

Vec eval_neural(const NeuralBehavior& nb, const Vec& x) { return nb.eval(x); }

NeuralBehavior NeuralBehavior::from_json(const nlohmann::json& j, const BoxSpace& input_space) {
    if (!j.contains("layers") || !j.contains("out_lo") || !j.contains("out_hi")) {
        throw IoError("weights document requires 'layers', 'out_lo' and 'out_hi'");
    }
    std::vector<NeuralLayer> layers;
    for (const auto& lj : j.at("layers")) {
        NeuralLayer layer;
        const auto& w = lj.at("w");
        if (!w.is_array() || w.empty()) throw IoError("layer weight matrix must be nonempty");
        const std::size_t rows = w.size();
        const std::size_t cols = w[0].size();
        layer.weights.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            if (w[r].size() != cols) throw IoError("ragged layer weight matrix");
            for (std::size_t c = 0; c < cols; ++c) {
                layer.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    w[r][c].get<double>();
            }
        }
        const auto& b = lj.at("b");
        layer.bias.resize(static_cast<Eigen::Index>(b.size()));
        for (std::size_t r = 0; r < b.size(); ++r) {
            layer.bias[static_cast<Eigen::Index>(r)] = b[r].get<double>();
        }
        layer.act = activation_from_string(lj.at("act").get<std::string>());
        layers.push_back(std::move(layer));
    }
    auto read_vec = [&](const char* field) {
        const auto& a = j.at(field);
        Vec v(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) v[static_cast<int>(k)] = a[k].get<double>();
        return v;
    };
    Vec lo = read_vec("out_lo");
    Vec hi = read_vec("out_hi");
    BoxSpace out(lo, hi);
    Vec scale = j.contains("out_scale") ? read_vec("out_scale") : Vec::Ones(out.dims());
    Vec offset = j.contains("out_offset") ? read_vec("out_offset") : Vec::Zero(out.dims());
    return NeuralBehavior(input_space, std::move(out), std::move(layers), std::move(scale),
                          std::move(offset));
}

nlohmann::ordered_json NeuralBehavior::to_json() const {
    nlohmann::ordered_json j;
    j["layers"] = nlohmann::ordered_json::array();
    for (const NeuralLayer& layer : layers_) {
        nlohmann::ordered_json lj;
        auto w = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            auto row = nlohmann::ordered_json::array();
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                row.push_back(layer.weights(r, c));
            }
            w.push_back(std::move(row));
        }
        lj["w"] = std::move(w);
        auto b = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) b.push_back(layer.bias[r]);
        lj["b"] = std::move(b);
        lj["act"] = activation_to_string(layer.act);
        j["layers"].push_back(std::move(lj));
    }
    auto vec = [](const Vec& v) {
        auto a = nlohmann::ordered_json::array();
        for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
        return a;
    };
    j["out_lo"] = vec(output_space().lower());
    j["out_hi"] = vec(output_space().upper());
    j["out_scale"] = vec(out_scale_);
    j["out_offset"] = vec(out_offset_);
    return j;
}

} // namespace crepair
