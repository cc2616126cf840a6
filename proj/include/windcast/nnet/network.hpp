#pragma once

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/nnet/layers.hpp"
#include "windcast/nnet/tensor.hpp"
#include "windcast/rng.hpp"

namespace windcast::nnet {

// Architecture + optimizer choice. Loss is always mean squared error.
struct ModelSpec {
    Shape input;
    std::vector<LayerSpec> layers;
    double learning_rate = 0.001;

    nlohmann::json to_json() const {
        nlohmann::json ls = nlohmann::json::array();
        for (const auto& l : layers) ls.push_back(layer_spec_to_json(l));
        return nlohmann::json{{"input_length", input.l},
                              {"input_channels", input.c},
                              {"layers", std::move(ls)},
                              {"optimizer", "adam"},
                              {"learning_rate", learning_rate},
                              {"loss", "mse"}};
    }

    static ModelSpec from_json(const nlohmann::json& j) {
        ModelSpec s;
        s.input.l = j.at("input_length").get<int>();
        s.input.c = j.at("input_channels").get<int>();
        for (const auto& lj : j.at("layers")) s.layers.push_back(layer_spec_from_json(lj));
        s.learning_rate = j.value("learning_rate", 0.001);
        return s;
    }
};

struct ParamSegment {
    std::string name;  // "layer3:dense"
    std::size_t offset = 0;
    std::size_t count = 0;
};

// A built network: layers, one flat trainable-parameter blob with named
// per-layer segments, and a parallel buffer blob (batchnorm running stats).
class Network {
public:
    explicit Network(const ModelSpec& spec) : spec_(spec) {
        if (spec.input.l < 1 || spec.input.c < 1)
            throw ConfigError("network: input shape must be positive");
        Shape shape = spec.input;
        std::size_t poff = 0, boff = 0;
        for (std::size_t i = 0; i < spec.layers.size(); ++i) {
            auto layer = make_layer(spec.layers[i], shape);
            ParamSegment seg;
            seg.name = "layer" + std::to_string(i) + ":" + layer->kind();
            seg.offset = poff;
            seg.count = layer->param_count();
            poff += seg.count;
            segments_.push_back(seg);
            ParamSegment bseg;
            bseg.name = seg.name;
            bseg.offset = boff;
            bseg.count = layer->buffer_count();
            boff += bseg.count;
            buffer_segments_.push_back(bseg);
            shape = layer->output_shape();
            layers_.push_back(std::move(layer));
        }
        output_shape_ = shape;
        params_.assign(poff, 0.0);
        grads_.assign(poff, 0.0);
        buffers_.assign(boff, 0.0);
    }

    const ModelSpec& spec() const { return spec_; }
    Shape output_shape() const { return output_shape_; }
    std::size_t param_count() const { return params_.size(); }
    std::size_t buffer_count() const { return buffers_.size(); }
    std::size_t layer_count() const { return layers_.size(); }
    const std::vector<ParamSegment>& segments() const { return segments_; }
    const std::vector<ParamSegment>& buffer_segments() const { return buffer_segments_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    std::vector<double>& buffers() { return buffers_; }
    const std::vector<double>& buffers() const { return buffers_; }
    const std::vector<double>& grads() const { return grads_; }

    // Draws every layer's initial parameters in layer order from one stream.
    void init_params(std::uint64_t seed) {
        Rng rng(seed);
        for (std::size_t i = 0; i < layers_.size(); ++i)
            layers_[i]->init_params(params_.data() + segments_[i].offset,
                                    buffers_.data() + buffer_segments_[i].offset, rng);
    }

    // Layers whose parameters (and batchnorm statistics) stay untouched.
    void set_frozen_layers(const std::set<std::size_t>& frozen) {
        for (std::size_t idx : frozen)
            if (idx >= layers_.size())
                throw ConfigError("frozen layer index " + std::to_string(idx) + " out of range");
        frozen_ = frozen;
    }
    const std::set<std::size_t>& frozen_layers() const { return frozen_; }
    bool is_frozen(std::size_t i) const { return frozen_.count(i) > 0; }

    // Forward pass. Training mode caches activations for backward and
    // consumes dropout_rng; inference is pure.
    const Array3& forward(const Array3& x, bool training, Rng* dropout_rng = nullptr) {
        if (x.l != spec_.input.l || x.c != spec_.input.c)
            throw InputError("network: batch shape (" + std::to_string(x.l) + "," +
                             std::to_string(x.c) + ") != input shape (" +
                             std::to_string(spec_.input.l) + "," + std::to_string(spec_.input.c) +
                             ")");
        acts_.resize(layers_.size() + 1);
        acts_[0] = x;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            layers_[i]->forward(acts_[i], acts_[i + 1], params_.data() + segments_[i].offset,
                                buffers_.data() + buffer_segments_[i].offset, training,
                                dropout_rng, is_frozen(i));
        }
        return acts_.back();
    }

    // Mean squared error over batch x positions, matching training's loss.
    static double mse(const Array3& pred, const Array3& target) {
        if (pred.v.size() != target.v.size())
            throw InputError("mse: prediction/target size mismatch");
        double acc = 0.0;
        for (std::size_t i = 0; i < pred.v.size(); ++i) {
            const double d = pred.v[i] - target.v[i];
            acc += d * d;
        }
        return pred.v.empty() ? 0.0 : acc / static_cast<double>(pred.v.size());
    }

    // Backward from MSE loss. Must follow a training-mode forward on the
    // same batch. Gradients are fresh (zeroed first), averaged like mse().
    double backward_mse(const Array3& target) {
        const Array3& pred = acts_.back();
        if (pred.v.size() != target.v.size())
            throw InputError("backward: prediction/target size mismatch");
        std::fill(grads_.begin(), grads_.end(), 0.0);
        Array3 grad = pred;
        const double scale = 2.0 / static_cast<double>(pred.v.size());
        double loss = 0.0;
        for (std::size_t i = 0; i < pred.v.size(); ++i) {
            const double d = pred.v[i] - target.v[i];
            loss += d * d;
            grad.v[i] = scale * d;
        }
        loss /= static_cast<double>(pred.v.size());
        Array3 gx;
        for (std::size_t i = layers_.size(); i-- > 0;) {
            layers_[i]->backward(acts_[i], grad, gx, params_.data() + segments_[i].offset,
                                 grads_.data() + segments_[i].offset,
                                 buffers_.data() + buffer_segments_[i].offset);
            std::swap(grad, gx);
        }
        return loss;
    }

    // --- parameter blob serialization (little-endian f64) ----------------

    nlohmann::json segment_index_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& s : segments_)
            j.push_back({{"name", s.name}, {"offset", s.offset}, {"count", s.count}});
        return j;
    }

    static void write_blob(std::ostream& os, const std::vector<double>& values) {
        static_assert(sizeof(double) == 8);
        for (double v : values) {
            unsigned char bytes[8];
            std::memcpy(bytes, &v, 8);
            if constexpr (std::endian::native == std::endian::big) {
                for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
            }
            os.write(reinterpret_cast<const char*>(bytes), 8);
        }
    }

    static std::vector<double> read_blob(std::istream& is, std::size_t count) {
        std::vector<double> values(count);
        for (std::size_t i = 0; i < count; ++i) {
            unsigned char bytes[8];
            if (!is.read(reinterpret_cast<char*>(bytes), 8))
                throw IntegrityError("parameter blob truncated at value " + std::to_string(i));
            if constexpr (std::endian::native == std::endian::big) {
                for (int k = 0; k < 4; ++k) std::swap(bytes[k], bytes[7 - k]);
            }
            std::memcpy(&values[i], bytes, 8);
        }
        return values;
    }

private:
    ModelSpec spec_;
    Shape output_shape_;
    std::vector<std::unique_ptr<Layer>> layers_;
    std::vector<ParamSegment> segments_, buffer_segments_;
    std::vector<double> params_, grads_, buffers_;
    std::vector<Array3> acts_;
    std::set<std::size_t> frozen_;
};

// Trainable-parameter count of a spec without building storage.
inline std::size_t param_count(const ModelSpec& spec) { return Network(spec).param_count(); }

}  // namespace windcast::nnet
