#pragma once

#include <vector>

#include "subthurston/combinatorics.hpp"
#include "subthurston/potential.hpp"

namespace subthurston::detail {

// Exact preimage-tree walk shared by the operator, measure, and statistics
// code. Starting from a basepoint on the split sphere, the children of a
// node are its images under the inverse branches of the selected 1-tiles
// whose colour matches the node's face. Every node at depth j is one
// branch preimage under F^j (and, when the basepoint is a face centre, the
// centre of one depth-j tile).
//
// node_fn(depth, point, phi_sum, aux, state) runs exactly once per node of
// depth >= 1, with phi_sum the Birkhoff sum of `weight` along the path
// back to the basepoint (0 when weight == nullptr) and `aux` the caller's
// path accumulator produced by aux_fn(point, parent_aux, depth, symbol).
//
// Work is split into one chunk per depth-`chunk_depth` subtree plus a
// serial chunk (index 0) for the shallow nodes; `states` receives one
// State per chunk, and chunks never share state, so results are the same
// for any thread count. Callers combine the states in index order.
template <class State, class Aux, class AuxFn, class NodeFn>
void walk_preimages(const Subsystem& sub, const SplitPoint& base, int n_max,
                    const Potential* weight, Aux root_aux, AuxFn&& aux_fn, NodeFn&& node_fn,
                    std::vector<State>& states, int chunk_depth = 2) {
    states.clear();
    states.emplace_back();  // shallow nodes
    if (n_max <= 0) return;

    const PillowMap& map = sub.map();
    const int nsym = sub.tile_count();
    std::vector<BranchAffine> branch(static_cast<std::size_t>(nsym));
    for (int id = 0; id < nsym; ++id) {
        const Tile1& t = sub.tile(id);
        branch[static_cast<std::size_t>(id)] = make_branch_affine(map, t.position, t.cell);
    }

    struct Node {
        FixedPoint p;
        double phi;
        Aux aux;
        int depth;
        Colour face;  // 0-tile holding the point; branches above it have this colour
    };

    const FixedPoint root_pt = FixedPoint::from_split(base);
    Node root{root_pt, 0.0, root_aux, 0, base.face};

    const int split = std::min(chunk_depth, n_max);
    std::vector<Node> frontier;

    // Serial phase: visit depths 1..split, collect the frontier.
    {
        std::vector<Node> stack{root};
        while (!stack.empty()) {
            Node cur = stack.back();
            stack.pop_back();
            if (cur.depth == split && cur.depth > 0) {
                frontier.push_back(cur);
                continue;
            }
            for (int id : sub.of_colour(cur.face)) {
                const BranchAffine& br = branch[static_cast<std::size_t>(id)];
                Node child;
                child.p = br.apply(cur.p, map.s);
                child.depth = cur.depth + 1;
                child.face = sub.tile(id).position;
                child.phi = cur.phi + (weight ? weight->eval(child.p) : 0.0);
                child.aux = aux_fn(child.p, cur.aux, child.depth, id);
                node_fn(child.depth, child.p, child.phi, child.aux, states[0]);
                if (child.depth < n_max) stack.push_back(child);
            }
        }
    }
    if (frontier.empty() || split >= n_max) return;

    states.resize(1 + frontier.size());
    parallel_chunks(frontier.size(), [&](std::size_t c) {
        State& st = states[c + 1];
        std::vector<Node> stack{frontier[c]};
        // The chunk root itself was already visited in the serial phase.
        while (!stack.empty()) {
            Node cur = stack.back();
            stack.pop_back();
            for (int id : sub.of_colour(cur.face)) {
                const BranchAffine& br = branch[static_cast<std::size_t>(id)];
                Node child;
                child.p = br.apply(cur.p, map.s);
                child.depth = cur.depth + 1;
                child.face = sub.tile(id).position;
                child.phi = cur.phi + (weight ? weight->eval(child.p) : 0.0);
                child.aux = aux_fn(child.p, cur.aux, child.depth, id);
                node_fn(child.depth, child.p, child.phi, child.aux, st);
                if (child.depth < n_max) stack.push_back(child);
            }
        }
    });
}

struct NoAux {};

}  // namespace subthurston::detail
