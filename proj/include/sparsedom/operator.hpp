#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/**
 * Black-box linear operator on grid functions of one Domain.
 *
 * apply_on() returns (Tf) only on the cells of a target cube (row-major over the
 * cube's intersection with the domain). Operators with local structure override
 * it; the default slices a full application. Implementations must be safe for
 * concurrent const use.
 */
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual GridFunction apply(const GridFunction& f) const = 0;
    virtual std::vector<double> apply_on(const GridFunction& f, const Cube& target) const;
    virtual std::string name() const = 0;
};

class IdentityOperator final : public LinearOperator {
public:
    GridFunction apply(const GridFunction& f) const override { return f; }
    std::vector<double> apply_on(const GridFunction& f, const Cube& target) const override;
    std::string name() const override { return "identity"; }
};

/// outer(inner(f)).
class ComposedOperator final : public LinearOperator {
public:
    ComposedOperator(std::shared_ptr<const LinearOperator> outer, std::shared_ptr<const LinearOperator> inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {}

    GridFunction apply(const GridFunction& f) const override { return outer_->apply(inner_->apply(f)); }
    std::vector<double> apply_on(const GridFunction& f, const Cube& target) const override {
        return outer_->apply_on(inner_->apply(f), target);
    }
    std::string name() const override { return outer_->name() + " o " + inner_->name(); }

private:
    std::shared_ptr<const LinearOperator> outer_;
    std::shared_ptr<const LinearOperator> inner_;
};

/// Values of g on the cells of q inside the domain, row-major.
std::vector<double> gather(const GridFunction& g, const Cube& q);

}  // namespace sparsedom
