#include "dynbiot/element.hpp"

#include <stdexcept>

namespace dynbiot {

int local_node_count(Space space) {
    switch (space) {
        case Space::P1: return 3;
        case Space::P2: return 6;
        case Space::P2Vec: return 6;  // scalar nodes; two components each
    }
    throw std::invalid_argument("local_node_count: unknown space");
}

int ReferenceElement::node_count() const { return local_node_count(space); }

void ReferenceElement::eval(const Vec2& xi, std::vector<double>& values) const {
    const double l0 = 1.0 - xi.x - xi.y;
    const double l1 = xi.x;
    const double l2 = xi.y;
    if (space == Space::P1) {
        values.assign({l0, l1, l2});
        return;
    }
    values.assign({l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
                   4.0 * l0 * l1, 4.0 * l1 * l2, 4.0 * l2 * l0});
}

void ReferenceElement::eval_grad(const Vec2& xi, std::vector<Vec2>& grads) const {
    static const Vec2 dl0{-1.0, -1.0}, dl1{1.0, 0.0}, dl2{0.0, 1.0};
    if (space == Space::P1) {
        grads.assign({dl0, dl1, dl2});
        return;
    }
    const double l0 = 1.0 - xi.x - xi.y;
    const double l1 = xi.x;
    const double l2 = xi.y;
    grads.assign({dl0 * (4.0 * l0 - 1.0), dl1 * (4.0 * l1 - 1.0), dl2 * (4.0 * l2 - 1.0),
                  4.0 * (dl0 * l1 + dl1 * l0), 4.0 * (dl1 * l2 + dl2 * l1),
                  4.0 * (dl2 * l0 + dl0 * l2)});
}

std::vector<Vec2> ReferenceElement::nodes() const {
    if (space == Space::P1) {
        return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    }
    return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
}

}  // namespace dynbiot
