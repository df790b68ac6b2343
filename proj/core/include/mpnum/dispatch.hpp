#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpnum/array.hpp"

namespace mpnum::dispatch {

// Resolved kernel signature: input precisions plus the promoted output.
struct KernelKey {
    Precision in_a;
    std::optional<Precision> in_b;  // empty for unary operations
    Precision out;

    bool operator==(const KernelKey&) const = default;
};

using Kernel = std::function<MPArray(const KernelKey&, const MPArray&,
                                     const MPArray*)>;

// Immutable table built once at startup, mapping operation names to the
// kernel run for any input-precision combination (mixed inputs are widened
// exactly to the output precision before the homogeneous kernel runs).
class KernelRegistry {
public:
    static const KernelRegistry& instance();

    bool is_registered(const std::string& op_name) const;
    bool is_unary(const std::string& op_name) const;
    const Kernel& lookup(const std::string& op_name) const;

private:
    KernelRegistry();
    struct Entry {
        Kernel kernel;
        bool unary;
    };
    std::vector<std::pair<std::string, Entry>> table_;
};

// KernelKey for a registered binary operation; out = promote(a, b).
KernelKey resolve(const std::string& op_name, Precision a, Precision b);

// Unary form.
KernelKey resolve(const std::string& op_name, Precision a);

MPArray execute(const KernelKey& key, const std::string& op_name, const MPArray& a,
                const MPArray& b);
MPArray execute(const KernelKey& key, const std::string& op_name, const MPArray& a);

}  // namespace mpnum::dispatch
