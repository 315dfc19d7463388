#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hydro/blstm.hpp"

namespace hydro {

/// A trained model plus the metadata needed to rebuild its input pipeline.
struct Checkpoint {
    BlstmModel model;
    int epoch = 0;
    double val_mse = 0.0;
    std::size_t window = 1;
    std::size_t stride = 1;
    std::vector<std::string> predictors;
    std::vector<std::string> responses;

    bool operator==(const Checkpoint&) const = default;
};

/// Text format: header fields followed by one named array per tensor.
/// Numbers use shortest round-trip formatting, so save/load is bit-exact.
void save_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(std::istream& in);
void save_checkpoint_file(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint_file(const std::string& path);

}  // namespace hydro
