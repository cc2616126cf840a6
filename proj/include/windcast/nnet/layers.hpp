#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/nnet/tensor.hpp"
#include "windcast/rng.hpp"

namespace windcast::nnet {

enum class Activation { linear, relu };

inline const char* activation_name(Activation a) {
    return a == Activation::relu ? "relu" : "linear";
}

inline Activation activation_from_name(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "linear") return Activation::linear;
    throw ConfigError("unknown activation: " + s);
}

// Declarative layer description; building a Network turns these into layers.
struct LayerSpec {
    std::string kind;  // dense conv1d bilstm batchnorm dropout activation flatten
    int units = 0;     // dense units, conv filters, bilstm units per direction
    int kernel_width = 0;
    int stride = 1;
    double dropout_rate = 0.0;
    Activation activation = Activation::linear;
    bool return_sequences = true;  // bilstm only

    static LayerSpec dense(int units, Activation act = Activation::linear) {
        LayerSpec s;
        s.kind = "dense";
        s.units = units;
        s.activation = act;
        return s;
    }
    static LayerSpec conv1d(int filters, int width, int stride,
                            Activation act = Activation::linear) {
        LayerSpec s;
        s.kind = "conv1d";
        s.units = filters;
        s.kernel_width = width;
        s.stride = stride;
        s.activation = act;
        return s;
    }
    static LayerSpec bilstm(int units, bool return_sequences) {
        LayerSpec s;
        s.kind = "bilstm";
        s.units = units;
        s.return_sequences = return_sequences;
        return s;
    }
    static LayerSpec batchnorm() {
        LayerSpec s;
        s.kind = "batchnorm";
        return s;
    }
    static LayerSpec dropout(double rate) {
        LayerSpec s;
        s.kind = "dropout";
        s.dropout_rate = rate;
        return s;
    }
    static LayerSpec activation_layer(Activation act) {
        LayerSpec s;
        s.kind = "activation";
        s.activation = act;
        return s;
    }
    static LayerSpec flatten() {
        LayerSpec s;
        s.kind = "flatten";
        return s;
    }
};

inline nlohmann::json layer_spec_to_json(const LayerSpec& s) {
    nlohmann::json j{{"kind", s.kind}};
    if (s.kind == "dense") {
        j["units"] = s.units;
        j["activation"] = activation_name(s.activation);
    } else if (s.kind == "conv1d") {
        j["filters"] = s.units;
        j["kernel_width"] = s.kernel_width;
        j["stride"] = s.stride;
        j["activation"] = activation_name(s.activation);
    } else if (s.kind == "bilstm") {
        j["units"] = s.units;
        j["return_sequences"] = s.return_sequences;
    } else if (s.kind == "dropout") {
        j["rate"] = s.dropout_rate;
    } else if (s.kind == "activation") {
        j["activation"] = activation_name(s.activation);
    }
    return j;
}

inline LayerSpec layer_spec_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dense")
        return LayerSpec::dense(j.at("units").get<int>(),
                                activation_from_name(j.value("activation", "linear")));
    if (kind == "conv1d")
        return LayerSpec::conv1d(j.at("filters").get<int>(), j.at("kernel_width").get<int>(),
                                 j.value("stride", 1),
                                 activation_from_name(j.value("activation", "linear")));
    if (kind == "bilstm")
        return LayerSpec::bilstm(j.at("units").get<int>(), j.at("return_sequences").get<bool>());
    if (kind == "batchnorm") return LayerSpec::batchnorm();
    if (kind == "dropout") return LayerSpec::dropout(j.at("rate").get<double>());
    if (kind == "activation")
        return LayerSpec::activation_layer(activation_from_name(j.at("activation").get<std::string>()));
    if (kind == "flatten") return LayerSpec::flatten();
    throw ConfigError("unknown layer kind: " + kind);
}

namespace detail {

inline double apply_act(Activation a, double z) {
    return a == Activation::relu ? (z > 0.0 ? z : 0.0) : z;
}

inline double act_grad_from_pre(Activation a, double z) {
    return a == Activation::relu ? (z > 0.0 ? 1.0 : 0.0) : 1.0;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

// Layer contract. Shapes are fixed when the network is built; the batch
// dimension varies per call. Forward in training mode caches whatever the
// matching backward needs; inference forward is a pure function of
// (params, buffers, input). Parameter gradients ACCUMULATE into gp.
class Layer {
public:
    virtual ~Layer() = default;
    virtual const char* kind() const = 0;
    virtual Shape output_shape() const = 0;
    virtual std::size_t param_count() const = 0;
    virtual std::size_t buffer_count() const { return 0; }
    virtual void init_params(double* p, double* buf, Rng& rng) = 0;
    // frozen: parameters are not being trained; batchnorm then normalizes
    // with running statistics even in training mode.
    virtual void forward(const Array3& x, Array3& y, const double* p, double* buf, bool training,
                         Rng* dropout_rng, bool frozen) = 0;
    virtual void backward(const Array3& x, const Array3& gy, Array3& gx, const double* p,
                          double* gp, const double* buf) = 0;

protected:
    static void check_input(const Array3& x, const Shape& expect, const char* who) {
        if (x.l != expect.l || x.c != expect.c)
            throw InputError(std::string(who) + ": input shape (" + std::to_string(x.l) + "," +
                             std::to_string(x.c) + ") != expected (" + std::to_string(expect.l) +
                             "," + std::to_string(expect.c) + ")");
    }
};

// Time-distributed fully connected layer: the same kernel applies at every
// sequence position. Params: W (c_in x units) then bias (units).
class DenseLayer final : public Layer {
public:
    DenseLayer(Shape in, int units, Activation act) : in_(in), units_(units), act_(act) {
        if (units < 1) throw ConfigError("dense: units must be >= 1");
    }

    const char* kind() const override { return "dense"; }
    Shape output_shape() const override { return {in_.l, units_}; }
    std::size_t param_count() const override {
        return static_cast<std::size_t>(in_.c) * static_cast<std::size_t>(units_) +
               static_cast<std::size_t>(units_);
    }

    void init_params(double* p, double*, Rng& rng) override {
        const double limit = std::sqrt(6.0 / (in_.c + units_));
        const std::size_t nw = static_cast<std::size_t>(in_.c) * static_cast<std::size_t>(units_);
        for (std::size_t i = 0; i < nw; ++i) p[i] = rng.uniform(-limit, limit);
        for (int u = 0; u < units_; ++u) p[nw + static_cast<std::size_t>(u)] = 0.0;
    }

    void forward(const Array3& x, Array3& y, const double* p, double*, bool training, Rng*,
                 bool) override {
        check_input(x, in_, "dense");
        y.resize(x.b, in_.l, units_);
        const double* b = p + static_cast<std::size_t>(in_.c) * static_cast<std::size_t>(units_);
        const int rows = x.b * in_.l;
        if (training) pre_.resize(x.b, in_.l, units_);
        for (int r = 0; r < rows; ++r) {
            const double* xr = x.v.data() + static_cast<std::size_t>(r) * in_.c;
            double* yr = y.v.data() + static_cast<std::size_t>(r) * units_;
            for (int u = 0; u < units_; ++u) yr[u] = b[u];
            for (int c = 0; c < in_.c; ++c) {
                const double xv = xr[c];
                const double* wrow = p + static_cast<std::size_t>(c) * units_;
                for (int u = 0; u < units_; ++u) yr[u] += xv * wrow[u];
            }
            if (training) {
                double* zr = pre_.v.data() + static_cast<std::size_t>(r) * units_;
                for (int u = 0; u < units_; ++u) zr[u] = yr[u];
            }
            if (act_ == Activation::relu)
                for (int u = 0; u < units_; ++u) yr[u] = yr[u] > 0.0 ? yr[u] : 0.0;
        }
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double* p, double* gp,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        double* gb = gp + static_cast<std::size_t>(in_.c) * static_cast<std::size_t>(units_);
        const int rows = x.b * in_.l;
        std::vector<double> gz(static_cast<std::size_t>(units_));
        for (int r = 0; r < rows; ++r) {
            const double* xr = x.v.data() + static_cast<std::size_t>(r) * in_.c;
            const double* gyr = gy.v.data() + static_cast<std::size_t>(r) * units_;
            const double* zr = pre_.v.data() + static_cast<std::size_t>(r) * units_;
            double* gxr = gx.v.data() + static_cast<std::size_t>(r) * in_.c;
            for (int u = 0; u < units_; ++u)
                gz[static_cast<std::size_t>(u)] = gyr[u] * detail::act_grad_from_pre(act_, zr[u]);
            for (int u = 0; u < units_; ++u) gb[u] += gz[static_cast<std::size_t>(u)];
            for (int c = 0; c < in_.c; ++c) {
                const double xv = xr[c];
                double* gwrow = gp + static_cast<std::size_t>(c) * units_;
                const double* wrow = p + static_cast<std::size_t>(c) * units_;
                double acc = 0.0;
                for (int u = 0; u < units_; ++u) {
                    gwrow[u] += xv * gz[static_cast<std::size_t>(u)];
                    acc += wrow[u] * gz[static_cast<std::size_t>(u)];
                }
                gxr[c] = acc;
            }
        }
    }

private:
    Shape in_;
    int units_;
    Activation act_;
    Array3 pre_;  // pre-activation cache (train mode)
};

// Valid-padding 1-D convolution over the length axis.
// Params: W (width x c_in x filters) then bias (filters).
class Conv1dLayer final : public Layer {
public:
    Conv1dLayer(Shape in, int filters, int width, int stride, Activation act)
        : in_(in), filters_(filters), width_(width), stride_(stride), act_(act) {
        if (filters < 1 || width < 1 || stride < 1)
            throw ConfigError("conv1d: filters, width, stride must be >= 1");
        if (width > in.l)
            throw ConfigError("conv1d: kernel width " + std::to_string(width) +
                              " exceeds input length " + std::to_string(in.l));
        out_l_ = (in.l - width) / stride + 1;
    }

    const char* kind() const override { return "conv1d"; }
    Shape output_shape() const override { return {out_l_, filters_}; }
    std::size_t param_count() const override {
        return static_cast<std::size_t>(width_) * in_.c * filters_ +
               static_cast<std::size_t>(filters_);
    }

    void init_params(double* p, double*, Rng& rng) override {
        const double limit = std::sqrt(6.0 / (width_ * in_.c + width_ * filters_));
        const std::size_t nw = static_cast<std::size_t>(width_) * in_.c * filters_;
        for (std::size_t i = 0; i < nw; ++i) p[i] = rng.uniform(-limit, limit);
        for (int f = 0; f < filters_; ++f) p[nw + static_cast<std::size_t>(f)] = 0.0;
    }

    void forward(const Array3& x, Array3& y, const double* p, double*, bool training, Rng*,
                 bool) override {
        check_input(x, in_, "conv1d");
        y.resize(x.b, out_l_, filters_);
        const double* bias = p + static_cast<std::size_t>(width_) * in_.c * filters_;
        if (training) pre_.resize(x.b, out_l_, filters_);
        for (int i = 0; i < x.b; ++i) {
            for (int j = 0; j < out_l_; ++j) {
                double* yr = y.row(i, j);
                for (int f = 0; f < filters_; ++f) yr[f] = bias[f];
                for (int k = 0; k < width_; ++k) {
                    const double* xr = x.row(i, j * stride_ + k);
                    const double* wk = p + (static_cast<std::size_t>(k) * in_.c) * filters_;
                    for (int c = 0; c < in_.c; ++c) {
                        const double xv = xr[c];
                        const double* wrow = wk + static_cast<std::size_t>(c) * filters_;
                        for (int f = 0; f < filters_; ++f) yr[f] += xv * wrow[f];
                    }
                }
                if (training) {
                    double* zr = pre_.row(i, j);
                    for (int f = 0; f < filters_; ++f) zr[f] = yr[f];
                }
                if (act_ == Activation::relu)
                    for (int f = 0; f < filters_; ++f) yr[f] = yr[f] > 0.0 ? yr[f] : 0.0;
            }
        }
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double* p, double* gp,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        double* gbias = gp + static_cast<std::size_t>(width_) * in_.c * filters_;
        std::vector<double> gz(static_cast<std::size_t>(filters_));
        for (int i = 0; i < x.b; ++i) {
            for (int j = 0; j < out_l_; ++j) {
                const double* gyr = gy.row(i, j);
                const double* zr = pre_.row(i, j);
                for (int f = 0; f < filters_; ++f)
                    gz[static_cast<std::size_t>(f)] =
                        gyr[f] * detail::act_grad_from_pre(act_, zr[f]);
                for (int f = 0; f < filters_; ++f) gbias[f] += gz[static_cast<std::size_t>(f)];
                for (int k = 0; k < width_; ++k) {
                    const double* xr = x.row(i, j * stride_ + k);
                    double* gxr = gx.row(i, j * stride_ + k);
                    const double* wk = p + (static_cast<std::size_t>(k) * in_.c) * filters_;
                    double* gwk = gp + (static_cast<std::size_t>(k) * in_.c) * filters_;
                    for (int c = 0; c < in_.c; ++c) {
                        const double xv = xr[c];
                        const double* wrow = wk + static_cast<std::size_t>(c) * filters_;
                        double* gwrow = gwk + static_cast<std::size_t>(c) * filters_;
                        double acc = 0.0;
                        for (int f = 0; f < filters_; ++f) {
                            gwrow[f] += xv * gz[static_cast<std::size_t>(f)];
                            acc += wrow[f] * gz[static_cast<std::size_t>(f)];
                        }
                        gxr[c] += acc;
                    }
                }
            }
        }
    }

private:
    Shape in_;
    int filters_, width_, stride_, out_l_ = 0;
    Activation act_;
    Array3 pre_;
};

// Bidirectional LSTM. Each direction owns a kernel W (c_in x 4H), a
// recurrent kernel U (H x 4H) and a bias (4H), gate order [i f g o].
// return_sequences concatenates the two hidden sequences channel-wise
// (backward direction re-aligned to input positions); otherwise the two
// final states concatenate into a single length-1 row.
class BiLstmLayer final : public Layer {
public:
    BiLstmLayer(Shape in, int units, bool return_sequences)
        : in_(in), h_(units), seq_(return_sequences) {
        if (units < 1) throw ConfigError("bilstm: units must be >= 1");
        if (in.l < 1) throw ConfigError("bilstm: needs a sequence input");
    }

    const char* kind() const override { return "bilstm"; }
    Shape output_shape() const override { return seq_ ? Shape{in_.l, 2 * h_} : Shape{1, 2 * h_}; }
    std::size_t param_count() const override {
        return 2 * dir_params();
    }

    void init_params(double* p, double*, Rng& rng) override {
        for (int d = 0; d < 2; ++d) {
            double* pd = p + static_cast<std::size_t>(d) * dir_params();
            const double wlim = std::sqrt(6.0 / (in_.c + 4 * h_));
            const double ulim = std::sqrt(6.0 / (h_ + 4 * h_));
            const std::size_t nw = static_cast<std::size_t>(in_.c) * 4 * h_;
            const std::size_t nu = static_cast<std::size_t>(h_) * 4 * h_;
            for (std::size_t i = 0; i < nw; ++i) pd[i] = rng.uniform(-wlim, wlim);
            for (std::size_t i = 0; i < nu; ++i) pd[nw + i] = rng.uniform(-ulim, ulim);
            // biases zero except the forget gate, which starts open
            for (int g = 0; g < 4 * h_; ++g)
                pd[nw + nu + static_cast<std::size_t>(g)] = (g >= h_ && g < 2 * h_) ? 1.0 : 0.0;
        }
    }

    void forward(const Array3& x, Array3& y, const double* p, double*, bool training, Rng*,
                 bool) override {
        check_input(x, in_, "bilstm");
        const Shape out = output_shape();
        y.resize(x.b, out.l, out.c);
        for (int d = 0; d < 2; ++d) {
            Cache& cache = cache_[d];
            if (training) {
                cache.gates.resize(x.b, in_.l, 4 * h_);  // post-activation i f g o
                cache.cell.resize(x.b, in_.l, h_);
                cache.hidden.resize(x.b, in_.l, h_);
            }
            const double* pd = p + static_cast<std::size_t>(d) * dir_params();
            const double* W = pd;
            const double* U = W + static_cast<std::size_t>(in_.c) * 4 * h_;
            const double* bias = U + static_cast<std::size_t>(h_) * 4 * h_;

            std::vector<double> hprev(static_cast<std::size_t>(x.b) * h_, 0.0);
            std::vector<double> cprev(static_cast<std::size_t>(x.b) * h_, 0.0);
            std::vector<double> z(static_cast<std::size_t>(x.b) * 4 * h_);
            for (int step = 0; step < in_.l; ++step) {
                const int t = d == 0 ? step : in_.l - 1 - step;  // input position
                for (int i = 0; i < x.b; ++i) {
                    double* zi = z.data() + static_cast<std::size_t>(i) * 4 * h_;
                    for (int g = 0; g < 4 * h_; ++g) zi[g] = bias[g];
                    const double* xr = x.row(i, t);
                    for (int c = 0; c < in_.c; ++c) {
                        const double xv = xr[c];
                        const double* wrow = W + static_cast<std::size_t>(c) * 4 * h_;
                        for (int g = 0; g < 4 * h_; ++g) zi[g] += xv * wrow[g];
                    }
                    const double* hp = hprev.data() + static_cast<std::size_t>(i) * h_;
                    for (int k = 0; k < h_; ++k) {
                        const double hv = hp[k];
                        if (hv == 0.0) continue;
                        const double* urow = U + static_cast<std::size_t>(k) * 4 * h_;
                        for (int g = 0; g < 4 * h_; ++g) zi[g] += hv * urow[g];
                    }
                }
                for (int i = 0; i < x.b; ++i) {
                    double* zi = z.data() + static_cast<std::size_t>(i) * 4 * h_;
                    double* hp = hprev.data() + static_cast<std::size_t>(i) * h_;
                    double* cp = cprev.data() + static_cast<std::size_t>(i) * h_;
                    for (int k = 0; k < h_; ++k) {
                        const double ig = detail::sigmoid(zi[k]);
                        const double fg = detail::sigmoid(zi[h_ + k]);
                        const double gg = std::tanh(zi[2 * h_ + k]);
                        const double og = detail::sigmoid(zi[3 * h_ + k]);
                        const double cnew = fg * cp[k] + ig * gg;
                        const double hnew = og * std::tanh(cnew);
                        if (training) {
                            double* gr = cache.gates.row(i, t);
                            gr[k] = ig;
                            gr[h_ + k] = fg;
                            gr[2 * h_ + k] = gg;
                            gr[3 * h_ + k] = og;
                            cache.cell.at(i, t, k) = cnew;
                            cache.hidden.at(i, t, k) = hnew;
                        }
                        cp[k] = cnew;
                        hp[k] = hnew;
                    }
                    if (seq_) {
                        double* yr = y.row(i, t) + d * h_;
                        for (int k = 0; k < h_; ++k) yr[k] = hp[k];
                    }
                }
            }
            if (!seq_) {
                for (int i = 0; i < x.b; ++i) {
                    double* yr = y.row(i, 0) + d * h_;
                    const double* hp = hprev.data() + static_cast<std::size_t>(i) * h_;
                    for (int k = 0; k < h_; ++k) yr[k] = hp[k];
                }
            }
        }
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double* p, double* gp,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        for (int d = 0; d < 2; ++d) {
            const Cache& cache = cache_[d];
            const double* pd = p + static_cast<std::size_t>(d) * dir_params();
            const double* W = pd;
            const double* U = W + static_cast<std::size_t>(in_.c) * 4 * h_;
            double* gpd = gp + static_cast<std::size_t>(d) * dir_params();
            double* gW = gpd;
            double* gU = gW + static_cast<std::size_t>(in_.c) * 4 * h_;
            double* gbias = gU + static_cast<std::size_t>(h_) * 4 * h_;

            std::vector<double> dh_next(static_cast<std::size_t>(x.b) * h_, 0.0);
            std::vector<double> dc_next(static_cast<std::size_t>(x.b) * h_, 0.0);
            std::vector<double> dz(static_cast<std::size_t>(x.b) * 4 * h_);
            // walk processing order in reverse
            for (int step = in_.l - 1; step >= 0; --step) {
                const int t = d == 0 ? step : in_.l - 1 - step;
                for (int i = 0; i < x.b; ++i) {
                    const double* gr = cache.gates.row(i, t);
                    double* dzi = dz.data() + static_cast<std::size_t>(i) * 4 * h_;
                    double* dhn = dh_next.data() + static_cast<std::size_t>(i) * h_;
                    double* dcn = dc_next.data() + static_cast<std::size_t>(i) * h_;
                    for (int k = 0; k < h_; ++k) {
                        double dh = dhn[k];
                        if (seq_) {
                            dh += gy.at(i, t, d * h_ + k);
                        } else if (step == in_.l - 1) {
                            dh += gy.at(i, 0, d * h_ + k);
                        }
                        const double ig = gr[k], fg = gr[h_ + k], gg = gr[2 * h_ + k],
                                     og = gr[3 * h_ + k];
                        const double cnew = cache.cell.at(i, t, k);
                        const double tc = std::tanh(cnew);
                        // previous cell state along the processing order
                        const int tprev = d == 0 ? t - 1 : t + 1;
                        const double cprev =
                            step > 0 ? cache.cell.at(i, tprev, k) : 0.0;
                        double dc = dh * og * (1.0 - tc * tc) + dcn[k];
                        const double dog = dh * tc;
                        const double dig = dc * gg;
                        const double dgg = dc * ig;
                        const double dfg = dc * cprev;
                        dcn[k] = dc * fg;
                        dzi[k] = dig * ig * (1.0 - ig);
                        dzi[h_ + k] = dfg * fg * (1.0 - fg);
                        dzi[2 * h_ + k] = dgg * (1.0 - gg * gg);
                        dzi[3 * h_ + k] = dog * og * (1.0 - og);
                        dhn[k] = 0.0;  // refilled below from U^T dz
                    }
                }
                for (int i = 0; i < x.b; ++i) {
                    const double* dzi = dz.data() + static_cast<std::size_t>(i) * 4 * h_;
                    for (int g = 0; g < 4 * h_; ++g) gbias[g] += dzi[g];
                    const double* xr = x.row(i, t);
                    double* gxr = gx.row(i, t);
                    for (int c = 0; c < in_.c; ++c) {
                        const double xv = xr[c];
                        double* gwrow = gW + static_cast<std::size_t>(c) * 4 * h_;
                        const double* wrow = W + static_cast<std::size_t>(c) * 4 * h_;
                        double acc = 0.0;
                        for (int g = 0; g < 4 * h_; ++g) {
                            gwrow[g] += xv * dzi[g];
                            acc += wrow[g] * dzi[g];
                        }
                        gxr[c] += acc;
                    }
                    if (step > 0) {
                        const int tprev = d == 0 ? t - 1 : t + 1;
                        double* dhn = dh_next.data() + static_cast<std::size_t>(i) * h_;
                        for (int k = 0; k < h_; ++k) {
                            const double hprev = cache.hidden.at(i, tprev, k);
                            double* gurow = gU + static_cast<std::size_t>(k) * 4 * h_;
                            const double* urow = U + static_cast<std::size_t>(k) * 4 * h_;
                            double acc = 0.0;
                            for (int g = 0; g < 4 * h_; ++g) {
                                gurow[g] += hprev * dzi[g];
                                acc += urow[g] * dzi[g];
                            }
                            dhn[k] = acc;
                        }
                    }
                }
            }
        }
    }

private:
    std::size_t dir_params() const {
        return static_cast<std::size_t>(4 * h_) * (in_.c + h_ + 1);
    }

    struct Cache {
        Array3 gates, cell, hidden;  // indexed by input position t
    };

    Shape in_;
    int h_;
    bool seq_;
    Cache cache_[2];
};

// Channel-wise batch normalization over (batch, length). Trainable scale
// and shift; running statistics kept as buffers updated by EMA in train
// mode. A frozen instance normalizes with its running statistics even
// while the surrounding network trains.
class BatchNormLayer final : public Layer {
public:
    static constexpr double kEps = 1e-8;
    static constexpr double kMomentum = 0.99;

    explicit BatchNormLayer(Shape in) : in_(in) {}

    const char* kind() const override { return "batchnorm"; }
    Shape output_shape() const override { return in_; }
    std::size_t param_count() const override { return 2 * static_cast<std::size_t>(in_.c); }
    std::size_t buffer_count() const override { return 2 * static_cast<std::size_t>(in_.c); }

    void init_params(double* p, double* buf, Rng&) override {
        for (int c = 0; c < in_.c; ++c) {
            p[c] = 1.0;                                  // gamma
            p[in_.c + c] = 0.0;                          // beta
            buf[c] = 0.0;                                // running mean
            buf[in_.c + c] = 1.0;                        // running var
        }
    }

    void forward(const Array3& x, Array3& y, const double* p, double* buf, bool training,
                 Rng*, bool frozen) override {
        check_input(x, in_, "batchnorm");
        y.resize(x.b, in_.l, in_.c);
        const double* gamma = p;
        const double* beta = p + in_.c;
        const int rows = x.b * in_.l;
        const bool use_batch_stats = training && !frozen;
        if (use_batch_stats) {
            if (rows < 2) throw InputError("batchnorm: train batch needs >= 2 rows");
            mean_.assign(static_cast<std::size_t>(in_.c), 0.0);
            var_.assign(static_cast<std::size_t>(in_.c), 0.0);
            for (int r = 0; r < rows; ++r) {
                const double* xr = x.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) mean_[static_cast<std::size_t>(c)] += xr[c];
            }
            for (int c = 0; c < in_.c; ++c) mean_[static_cast<std::size_t>(c)] /= rows;
            for (int r = 0; r < rows; ++r) {
                const double* xr = x.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) {
                    const double d = xr[c] - mean_[static_cast<std::size_t>(c)];
                    var_[static_cast<std::size_t>(c)] += d * d;
                }
            }
            for (int c = 0; c < in_.c; ++c) var_[static_cast<std::size_t>(c)] /= rows;  // biased
            for (int c = 0; c < in_.c; ++c) {
                buf[c] = kMomentum * buf[c] + (1.0 - kMomentum) * mean_[static_cast<std::size_t>(c)];
                buf[in_.c + c] =
                    kMomentum * buf[in_.c + c] + (1.0 - kMomentum) * var_[static_cast<std::size_t>(c)];
            }
            inv_std_.resize(static_cast<std::size_t>(in_.c));
            for (int c = 0; c < in_.c; ++c)
                inv_std_[static_cast<std::size_t>(c)] =
                    1.0 / std::sqrt(var_[static_cast<std::size_t>(c)] + kEps);
            xhat_.resize(x.b, in_.l, in_.c);
            for (int r = 0; r < rows; ++r) {
                const double* xr = x.v.data() + static_cast<std::size_t>(r) * in_.c;
                double* hr = xhat_.v.data() + static_cast<std::size_t>(r) * in_.c;
                double* yr = y.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) {
                    hr[c] = (xr[c] - mean_[static_cast<std::size_t>(c)]) *
                            inv_std_[static_cast<std::size_t>(c)];
                    yr[c] = gamma[c] * hr[c] + beta[c];
                }
            }
            batch_stats_used_ = true;
        } else {
            // running statistics; no state mutated
            if (training) {
                // frozen layer inside a training pass: cache for backward
                inv_std_.resize(static_cast<std::size_t>(in_.c));
                for (int c = 0; c < in_.c; ++c)
                    inv_std_[static_cast<std::size_t>(c)] = 1.0 / std::sqrt(buf[in_.c + c] + kEps);
                xhat_.resize(x.b, in_.l, in_.c);
                batch_stats_used_ = false;
            }
            for (int r = 0; r < rows; ++r) {
                const double* xr = x.v.data() + static_cast<std::size_t>(r) * in_.c;
                double* yr = y.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) {
                    const double xh = (xr[c] - buf[c]) / std::sqrt(buf[in_.c + c] + kEps);
                    if (training) xhat_.v[static_cast<std::size_t>(r) * in_.c + c] = xh;
                    yr[c] = gamma[c] * xh + beta[c];
                }
            }
        }
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double* p, double* gp,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        const double* gamma = p;
        double* ggamma = gp;
        double* gbeta = gp + in_.c;
        const int rows = x.b * in_.l;
        if (batch_stats_used_) {
            // backprop through the batch statistics
            std::vector<double> sum_dxh(static_cast<std::size_t>(in_.c), 0.0);
            std::vector<double> sum_dxh_xh(static_cast<std::size_t>(in_.c), 0.0);
            for (int r = 0; r < rows; ++r) {
                const double* gyr = gy.v.data() + static_cast<std::size_t>(r) * in_.c;
                const double* hr = xhat_.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) {
                    const double dxh = gyr[c] * gamma[c];
                    sum_dxh[static_cast<std::size_t>(c)] += dxh;
                    sum_dxh_xh[static_cast<std::size_t>(c)] += dxh * hr[c];
                    ggamma[c] += gyr[c] * hr[c];
                    gbeta[c] += gyr[c];
                }
            }
            const double inv_n = 1.0 / rows;
            for (int r = 0; r < rows; ++r) {
                const double* gyr = gy.v.data() + static_cast<std::size_t>(r) * in_.c;
                const double* hr = xhat_.v.data() + static_cast<std::size_t>(r) * in_.c;
                double* gxr = gx.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) {
                    const double dxh = gyr[c] * gamma[c];
                    gxr[c] = inv_std_[static_cast<std::size_t>(c)] *
                             (dxh - inv_n * sum_dxh[static_cast<std::size_t>(c)] -
                              inv_n * hr[c] * sum_dxh_xh[static_cast<std::size_t>(c)]);
                }
            }
        } else {
            // statistics were constants (frozen layer)
            for (int r = 0; r < rows; ++r) {
                const double* gyr = gy.v.data() + static_cast<std::size_t>(r) * in_.c;
                const double* hr = xhat_.v.data() + static_cast<std::size_t>(r) * in_.c;
                double* gxr = gx.v.data() + static_cast<std::size_t>(r) * in_.c;
                for (int c = 0; c < in_.c; ++c) {
                    ggamma[c] += gyr[c] * hr[c];
                    gbeta[c] += gyr[c];
                    gxr[c] = gyr[c] * gamma[c] * inv_std_[static_cast<std::size_t>(c)];
                }
            }
        }
    }

private:
    Shape in_;
    std::vector<double> mean_, var_, inv_std_;
    Array3 xhat_;
    bool batch_stats_used_ = false;
};

// Inverted dropout: training scales survivors by 1/keep so inference is the
// identity. Mask draws are row-major over (batch, length, channels).
class DropoutLayer final : public Layer {
public:
    DropoutLayer(Shape in, double rate) : in_(in), rate_(rate) {
        if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout: rate must be in [0, 1)");
    }

    const char* kind() const override { return "dropout"; }
    Shape output_shape() const override { return in_; }
    std::size_t param_count() const override { return 0; }
    void init_params(double*, double*, Rng&) override {}

    void forward(const Array3& x, Array3& y, const double*, double*, bool training, Rng* rng,
                 bool) override {
        check_input(x, in_, "dropout");
        y.resize(x.b, in_.l, in_.c);
        if (!training || rate_ == 0.0) {
            y.v = x.v;
            mask_.assign(0, 0.0);
            return;
        }
        if (rng == nullptr) throw InputError("dropout: training forward needs an rng");
        const double keep = 1.0 - rate_;
        const double scale = 1.0 / keep;
        mask_.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            mask_[i] = rng->uniform01() < keep ? scale : 0.0;
            y.v[i] = x.v[i] * mask_[i];
        }
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double*, double*,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        if (mask_.empty()) {
            gx.v = gy.v;
            return;
        }
        for (std::size_t i = 0; i < gx.size(); ++i) gx.v[i] = gy.v[i] * mask_[i];
    }

private:
    Shape in_;
    double rate_;
    std::vector<double> mask_;
};

class ActivationLayer final : public Layer {
public:
    ActivationLayer(Shape in, Activation act) : in_(in), act_(act) {}

    const char* kind() const override { return "activation"; }
    Shape output_shape() const override { return in_; }
    std::size_t param_count() const override { return 0; }
    void init_params(double*, double*, Rng&) override {}

    void forward(const Array3& x, Array3& y, const double*, double*, bool, Rng*, bool) override {
        check_input(x, in_, "activation");
        y.resize(x.b, in_.l, in_.c);
        for (std::size_t i = 0; i < x.size(); ++i) y.v[i] = detail::apply_act(act_, x.v[i]);
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double*, double*,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        for (std::size_t i = 0; i < x.size(); ++i)
            gx.v[i] = gy.v[i] * detail::act_grad_from_pre(act_, x.v[i]);
    }

private:
    Shape in_;
    Activation act_;
};

class FlattenLayer final : public Layer {
public:
    explicit FlattenLayer(Shape in) : in_(in) {}

    const char* kind() const override { return "flatten"; }
    Shape output_shape() const override { return {1, in_.l * in_.c}; }
    std::size_t param_count() const override { return 0; }
    void init_params(double*, double*, Rng&) override {}

    void forward(const Array3& x, Array3& y, const double*, double*, bool, Rng*, bool) override {
        check_input(x, in_, "flatten");
        y.resize(x.b, 1, in_.l * in_.c);
        y.v = x.v;  // row-major layout is already flat per sample
    }

    void backward(const Array3& x, const Array3& gy, Array3& gx, const double*, double*,
                  const double*) override {
        gx.resize(x.b, in_.l, in_.c);
        gx.v = gy.v;
    }

private:
    Shape in_;
};

inline std::unique_ptr<Layer> make_layer(const LayerSpec& spec, Shape in) {
    if (spec.kind == "dense") return std::make_unique<DenseLayer>(in, spec.units, spec.activation);
    if (spec.kind == "conv1d")
        return std::make_unique<Conv1dLayer>(in, spec.units, spec.kernel_width, spec.stride,
                                             spec.activation);
    if (spec.kind == "bilstm")
        return std::make_unique<BiLstmLayer>(in, spec.units, spec.return_sequences);
    if (spec.kind == "batchnorm") return std::make_unique<BatchNormLayer>(in);
    if (spec.kind == "dropout") return std::make_unique<DropoutLayer>(in, spec.dropout_rate);
    if (spec.kind == "activation") return std::make_unique<ActivationLayer>(in, spec.activation);
    if (spec.kind == "flatten") return std::make_unique<FlattenLayer>(in);
    throw ConfigError("unknown layer kind: " + spec.kind);
}

}  // namespace windcast::nnet
