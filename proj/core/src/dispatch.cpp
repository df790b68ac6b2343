#include "mpnum/dispatch.hpp"

#include "mpnum/errors.hpp"
#include "mpnum/linalg.hpp"

namespace mpnum::dispatch {

namespace {

Kernel binary(MPArray (*fn)(const MPArray&, const MPArray&)) {
    return [fn](const KernelKey&, const MPArray& a, const MPArray* b) {
        return fn(a, *b);
    };
}

Kernel ew(BinaryOp op) {
    return [op](const KernelKey&, const MPArray& a, const MPArray* b) {
        return ew_binary(op, a, *b);
    };
}

Kernel unary_ew(UnaryOp op) {
    return [op](const KernelKey&, const MPArray& a, const MPArray*) {
        return ew_unary(op, a);
    };
}

MPArray rbind(const MPArray& a, const MPArray& b) {
    return concat(ConcatAxis::Rows, a, b);
}

MPArray cbind(const MPArray& a, const MPArray& b) {
    return concat(ConcatAxis::Cols, a, b);
}

MPArray matmul_fn(const MPArray& a, const MPArray& b) {
    return linalg::matmul(a, b);
}

MPArray crossprod_fn(const MPArray& a, const MPArray& b) {
    return linalg::crossprod(a, b);
}

}  // namespace

KernelRegistry::KernelRegistry() {
    auto add = [this](const std::string& name, Kernel k, bool unary) {
        table_.emplace_back(name, Entry{std::move(k), unary});
    };
    add("add", ew(BinaryOp::Add), false);
    add("sub", ew(BinaryOp::Sub), false);
    add("mul", ew(BinaryOp::Mul), false);
    add("div", ew(BinaryOp::Div), false);
    add("rbind", binary(&rbind), false);
    add("cbind", binary(&cbind), false);
    add("matmul", binary(&matmul_fn), false);
    add("crossprod", binary(&crossprod_fn), false);
    add("log", unary_ew(UnaryOp::Log), true);
    add("exp", unary_ew(UnaryOp::Exp), true);
    add("sqrt", unary_ew(UnaryOp::Sqrt), true);
    add("abs", unary_ew(UnaryOp::Abs), true);
    add("transpose",
        [](const KernelKey&, const MPArray& a, const MPArray*) {
            return transpose(a);
        },
        true);
    add("chol",
        [](const KernelKey&, const MPArray& a, const MPArray*) {
            return linalg::chol(a);
        },
        true);
    add("solve",
        [](const KernelKey&, const MPArray& a, const MPArray*) {
            return linalg::solve(a);
        },
        true);
}

const KernelRegistry& KernelRegistry::instance() {
    static const KernelRegistry registry;
    return registry;
}

bool KernelRegistry::is_registered(const std::string& op_name) const {
    for (const auto& [name, entry] : table_)
        if (name == op_name) return true;
    return false;
}

bool KernelRegistry::is_unary(const std::string& op_name) const {
    for (const auto& [name, entry] : table_)
        if (name == op_name) return entry.unary;
    throw UnknownOperation(op_name);
}

const Kernel& KernelRegistry::lookup(const std::string& op_name) const {
    for (const auto& [name, entry] : table_)
        if (name == op_name) return entry.kernel;
    throw UnknownOperation(op_name);
}

KernelKey resolve(const std::string& op_name, Precision a, Precision b) {
    if (!KernelRegistry::instance().is_registered(op_name)) {
        throw UnknownOperation(op_name);
    }
    return KernelKey{a, b, promote(a, b)};
}

KernelKey resolve(const std::string& op_name, Precision a) {
    if (!KernelRegistry::instance().is_registered(op_name)) {
        throw UnknownOperation(op_name);
    }
    return KernelKey{a, std::nullopt, a};
}

MPArray execute(const KernelKey& key, const std::string& op_name, const MPArray& a,
                const MPArray& b) {
    require_cpu(a, "execute");
    require_cpu(b, "execute");
    if (!key.in_b.has_value() || a.precision() != key.in_a ||
        b.precision() != *key.in_b) {
        throw PrecisionMismatch("execute(" + op_name +
                                "): input precisions do not match the kernel key");
    }
    const Kernel& kernel = KernelRegistry::instance().lookup(op_name);
    return kernel(key, a, &b);
}

MPArray execute(const KernelKey& key, const std::string& op_name, const MPArray& a) {
    require_cpu(a, "execute");
    if (key.in_b.has_value() || a.precision() != key.in_a) {
        throw PrecisionMismatch("execute(" + op_name +
                                "): input precision does not match the kernel key");
    }
    const Kernel& kernel = KernelRegistry::instance().lookup(op_name);
    return kernel(key, a, nullptr);
}

}  // namespace mpnum::dispatch
