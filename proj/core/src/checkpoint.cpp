#include "hydro/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

namespace {

constexpr std::string_view kMagic = "hydro-blstm-checkpoint 1";

std::size_t field_size(const text::Document& doc, std::string_view key) {
    const auto& v = doc.field(key);
    if (v.size() != 1) throw ParseError("field '" + std::string(key) + "' expects one value");
    const auto n = text::parse_int(v[0]);
    if (n < 0) throw ParseError("field '" + std::string(key) + "' is negative");
    return static_cast<std::size_t>(n);
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
    const auto& cfg = ckpt.model.config;
    text::DocumentWriter w(out, kMagic);
    w.field("P", std::to_string(cfg.predictors));
    w.field("h", std::to_string(cfg.hidden));
    w.field("I", std::to_string(cfg.input_steps));
    w.field("O", std::to_string(cfg.output_steps));
    w.field("R", std::to_string(cfg.responses));
    w.field("epoch", std::to_string(ckpt.epoch));
    w.field("val_mse", text::format_double(ckpt.val_mse));
    w.field("window", std::to_string(ckpt.window));
    w.field("stride", std::to_string(ckpt.stride));
    w.field("predictors", ckpt.predictors);
    w.field("responses", ckpt.responses);
    ckpt.model.params.for_each([&](const std::string& name, std::span<const double> v, bool) {
        // Vectors are written as rank 1, matrices with their two dims.
        if (name.find(".b_") != std::string::npos || name == "b_out") {
            const std::size_t dims[] = {v.size()};
            w.array(name, dims, v);
        } else if (name == "W_out") {
            const std::size_t dims[] = {cfg.responses, 2 * cfg.hidden};
            w.array(name, dims, v);
        } else {
            const bool recurrent = name.find(".U_") != std::string::npos;
            const std::size_t dims[] = {cfg.hidden, recurrent ? cfg.hidden : cfg.predictors};
            w.array(name, dims, v);
        }
    });
}

Checkpoint load_checkpoint(std::istream& in) {
    const auto doc = text::read_document(in, kMagic);
    Checkpoint ckpt;
    BlstmConfig cfg;
    cfg.predictors = field_size(doc, "P");
    cfg.hidden = field_size(doc, "h");
    cfg.input_steps = field_size(doc, "I");
    cfg.output_steps = field_size(doc, "O");
    cfg.responses = field_size(doc, "R");
    cfg.validate();
    ckpt.epoch = static_cast<int>(field_size(doc, "epoch"));
    ckpt.val_mse = text::parse_double(doc.field("val_mse").at(0));
    ckpt.window = field_size(doc, "window");
    ckpt.stride = field_size(doc, "stride");
    ckpt.predictors = doc.field("predictors");
    ckpt.responses = doc.field("responses");
    if (ckpt.predictors.size() != cfg.predictors || ckpt.responses.size() != cfg.responses) {
        throw ParseError("checkpoint feature lists disagree with P/R");
    }
    ckpt.model = BlstmModel::zeros(cfg);
    ckpt.model.params.for_each([&](const std::string& name, std::span<double> v, bool) {
        const auto& arr = doc.array(name);
        if (arr.values.size() != v.size()) {
            throw ParseError("checkpoint array '" + name + "' has " + std::to_string(arr.values.size()) +
                             " values, expected " + std::to_string(v.size()));
        }
        for (double x : arr.values) {
            if (!std::isfinite(x)) throw ParseError("checkpoint array '" + name + "' is not finite");
        }
        std::copy(arr.values.begin(), arr.values.end(), v.begin());
    });
    return ckpt;
}

void save_checkpoint_file(const std::string& path, const Checkpoint& checkpoint) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint '" + path + "'");
    save_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open checkpoint '" + path + "'");
    return load_checkpoint(in);
}

}  // namespace hydro
