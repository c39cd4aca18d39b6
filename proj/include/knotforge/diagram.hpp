#pragma once

// Oriented link diagrams as combinatorial maps.
//
// A crossing has four edge-ends ("slots") in counterclockwise order:
//   slot 0: incoming under-strand          slot 2: outgoing under-strand
//   slots 1, 3: the over-strand (entering at 1 or at 3)
// The crossing sign is +1 exactly when the over-strand enters at slot 1.
//
// Edges are oriented arcs between crossing ends.  Crossing-free circles
// ("free loops") are tracked by count; they carry no structure.
//
// The embedding is part of the data: faces are traced from the rotation
// system, and V - E + F = 2 is enforced per connected piece (sphere).

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace knotforge {

struct EndRef {
    int crossing = -1;
    int slot = -1;

    int id() const { return 4 * crossing + slot; }
    static EndRef from_id(int id) { return {id / 4, id % 4}; }
    friend bool operator==(EndRef a, EndRef b) {
        return a.crossing == b.crossing && a.slot == b.slot;
    }
};

// --- diagram code formats -------------------------------------------------

struct PDCode {
    std::vector<std::array<int, 4>> tuples;
    int free_loops = 0;
};

struct DTCode {
    std::vector<int> evens;  // signed even entries, one per odd position
};

struct GaussCode {
    struct Visit {
        int label = 0;
        bool over = false;
        int sign = 0;  // +1 / -1
    };
    std::vector<std::vector<Visit>> components;
};

using DiagramCode = std::variant<PDCode, DTCode, GaussCode>;

class Diagram {
  public:
    struct Crossing {
        std::array<int, 4> edge{-1, -1, -1, -1};
    };
    struct Edge {
        EndRef tail, head;
        int component = -1;
        int pos = -1;  // position along the component traversal
    };
    struct Face {
        int piece = 0;
        int color = 0;               // checkerboard color within its piece
        std::vector<int> darts;      // empty for the two faces of a free loop
    };

    Diagram() : Diagram(empty(0)) {}

    static Diagram empty(int free_loops) {
        Diagram d((Private()));
        d.free_loops_ = free_loops;
        d.finalize({});
        return d;
    }

    // Build a diagram from an end-pairing.  `mate` has size 4n and pairs the
    // crossing ends into edges (mate[mate[x]] == x, mate[x] != x).  Optional
    // hints pin edge directions at specific ends (true = the edge's head).
    static Diagram assemble(int n_crossings, const std::vector<int>& mate, int free_loops,
                            const std::vector<std::pair<int, bool>>& head_hints = {}) {
        require(n_crossings >= 0 && int(mate.size()) == 4 * n_crossings, errc::malformed_code,
                "end pairing has wrong size");
        for (int x = 0; x < 4 * n_crossings; ++x) {
            require(mate[x] >= 0 && mate[x] < 4 * n_crossings && mate[x] != x &&
                        mate[mate[x]] == x,
                    errc::malformed_code, "end pairing is not a fixed-point-free involution");
        }
        Diagram d((Private()));
        d.free_loops_ = free_loops;
        d.crossings_.resize(n_crossings);

        int n_ends = 4 * n_crossings;
        std::vector<int> edge_of_end(n_ends, -1);
        int n_edges = 0;
        for (int x = 0; x < n_ends; ++x) {
            if (edge_of_end[x] >= 0) continue;
            edge_of_end[x] = edge_of_end[mate[x]] = n_edges++;
        }
        d.edges_.resize(n_edges);
        for (int c = 0; c < n_crossings; ++c)
            for (int s = 0; s < 4; ++s) d.crossings_[c].edge[s] = edge_of_end[4 * c + s];

        // Orientation: -1 unknown, 1 head-here, 0 tail-here.
        std::vector<signed char> head_at(n_ends, -1);
        std::vector<int> work;
        auto set_head = [&](int end, bool is_head) {
            signed char v = is_head ? 1 : 0;
            if (head_at[end] == v) return;
            require(head_at[end] == -1, errc::inconsistent_orientation,
                    "conflicting strand orientations");
            head_at[end] = v;
            work.push_back(end);
        };
        for (int c = 0; c < n_crossings; ++c) {
            set_head(4 * c + 0, true);   // incoming under
            set_head(4 * c + 2, false);  // outgoing under
        }
        for (auto& [end, is_head] : head_hints) {
            require(end >= 0 && end < n_ends, errc::malformed_code, "hint end out of range");
            set_head(end, is_head);
        }
        auto propagate = [&]() {
            while (!work.empty()) {
                int x = work.back();
                work.pop_back();
                bool head = head_at[x] == 1;
                set_head(mate[x], !head);  // other end of the same edge
                int straight = (x & ~3) | ((x + 2) & 3);
                set_head(straight, !head);  // strand passes straight through
            }
        };
        propagate();
        for (int x = 0; x < n_ends; ++x) {
            if (head_at[x] != -1) continue;
            set_head(x, true);  // free choice: orient deterministically
            propagate();
        }

        for (int x = 0; x < n_ends; ++x) {
            int e = edge_of_end[x];
            EndRef ref = EndRef::from_id(x);
            if (head_at[x] == 1) {
                d.edges_[e].head = ref;
            } else {
                d.edges_[e].tail = ref;
            }
        }
        for (int c = 0; c < n_crossings; ++c) {
            bool in1 = head_at[4 * c + 1] == 1;
            bool in3 = head_at[4 * c + 3] == 1;
            require(in1 != in3, errc::inconsistent_orientation,
                    "over strand must pass through the crossing");
        }
        d.finalize(edge_of_end);
        return d;
    }

    // --- basic accessors ---------------------------------------------------

    int crossing_count() const { return int(crossings_.size()); }
    int edge_count() const { return int(edges_.size()); }
    int free_loops() const { return free_loops_; }
    const Crossing& crossing(int c) const { return crossings_[c]; }
    const Edge& edge(int e) const { return edges_[e]; }
    int end_edge(int c, int s) const { return crossings_[c].edge[s]; }
    bool end_is_head(EndRef r) const { return edges_[end_edge(r.crossing, r.slot)].head == r; }

    // Number of closed curves, free loops included.
    int link_components() const { return int(comp_edges_.size()) + free_loops_; }
    const std::vector<std::vector<int>>& component_edges() const { return comp_edges_; }

    int pieces() const { return n_pieces_ + free_loops_; }
    int piece_of_crossing(int c) const { return piece_of_crossing_[c]; }
    bool is_connected() const { return pieces() <= 1; }

    bool over_in_at_1(int c) const { return end_is_head({c, 1}); }
    int sign(int c) const { return over_in_at_1(c) ? +1 : -1; }
    int writhe() const {
        int w = 0;
        for (int c = 0; c < crossing_count(); ++c) w += sign(c);
        return w;
    }

    bool is_alternating() const {
        for (const auto& comp : comp_edges_) {
            int k = int(comp.size());
            for (int i = 0; i < k; ++i) {
                // Arrival of edge comp[i] vs arrival of the next edge.
                bool under_now = edges_[comp[i]].head.slot == 0;
                bool under_next = edges_[comp[(i + 1) % k]].head.slot == 0;
                if (under_now == under_next) return false;
            }
        }
        return true;
    }

    // --- faces ---------------------------------------------------------------

    // Darts: 2*e (tail->head) and 2*e+1 (head->tail).
    int dart_count() const { return 2 * edge_count(); }
    EndRef dart_arrival(int dart) const {
        const Edge& e = edges_[dart / 2];
        return (dart % 2 == 0) ? e.head : e.tail;
    }
    EndRef dart_departure(int dart) const {
        const Edge& e = edges_[dart / 2];
        return (dart % 2 == 0) ? e.tail : e.head;
    }
    // The dart of the edge at `end` that points away from it.
    int dart_leaving(EndRef end) const {
        int e = end_edge(end.crossing, end.slot);
        return edges_[e].tail == end ? 2 * e : 2 * e + 1;
    }

    // Graph faces only; each free loop additionally bounds two faces of its
    // own sphere, reported by all_faces().
    const std::vector<Face>& graph_faces() const { return faces_; }
    std::vector<Face> all_faces() const {
        std::vector<Face> out = faces_;
        for (int i = 0; i < free_loops_; ++i) {
            out.push_back({n_pieces_ + i, 0, {}});
            out.push_back({n_pieces_ + i, 1, {}});
        }
        return out;
    }
    int face_count() const { return int(faces_.size()) + 2 * free_loops_; }
    int dart_face(int dart) const { return dart_face_[dart]; }
    // Face at the corner of crossing c between slots s and s+1 (mod 4).
    int corner_face(int c, int s) const { return corner_face_[4 * c + s]; }
    int face_color(int f) const { return faces_[f].color; }

    // --- codes ---------------------------------------------------------------

    PDCode emit_pd() const {
        PDCode code;
        code.free_loops = free_loops_;
        std::vector<int> label(edge_count(), 0);
        int next = 1;
        for (const auto& comp : comp_edges_)
            for (int e : comp) label[e] = next++;
        for (int c = 0; c < crossing_count(); ++c) {
            code.tuples.push_back({label[crossings_[c].edge[0]], label[crossings_[c].edge[1]],
                                   label[crossings_[c].edge[2]], label[crossings_[c].edge[3]]});
        }
        return code;
    }

    // Lexicographically minimal PD text over relabelings and basepoints; the
    // default also minimizes over component orientation reversals.
    std::string canonical_code() const { return canonical(true); }
    std::string canonical_code_oriented() const { return canonical(false); }

  private:
    struct Private {};
    explicit Diagram(Private) {}

    std::vector<Crossing> crossings_;
    std::vector<Edge> edges_;
    int free_loops_ = 0;

    std::vector<std::vector<int>> comp_edges_;
    std::vector<int> piece_of_crossing_;
    int n_pieces_ = 0;

    std::vector<Face> faces_;
    std::vector<int> dart_face_;
    std::vector<int> corner_face_;

    struct CodeCache {
        std::mutex mu;
        std::optional<std::string> folded, oriented;
    };
    std::shared_ptr<CodeCache> cache_ = std::make_shared<CodeCache>();

    void finalize(const std::vector<int>& /*edge_of_end*/) {
        trace_components();
        trace_pieces();
        trace_faces();
        check_euler();
    }

    void trace_components() {
        comp_edges_.clear();
        std::vector<bool> seen(edge_count(), false);
        for (int e0 = 0; e0 < edge_count(); ++e0) {
            if (seen[e0]) continue;
            std::vector<int> comp;
            int e = e0;
            do {
                seen[e] = true;
                comp.push_back(e);
                EndRef h = edges_[e].head;
                EndRef nxt{h.crossing, (h.slot + 2) % 4};
                int ne = end_edge(nxt.crossing, nxt.slot);
                require(edges_[ne].tail == nxt, errc::inconsistent_orientation,
                        "strand does not continue through crossing");
                e = ne;
            } while (e != e0);
            for (size_t i = 0; i < comp.size(); ++i) {
                edges_[comp[i]].component = int(comp_edges_.size());
                edges_[comp[i]].pos = int(i);
            }
            comp_edges_.push_back(std::move(comp));
        }
    }

    void trace_pieces() {
        piece_of_crossing_.assign(crossing_count(), -1);
        n_pieces_ = 0;
        for (int c0 = 0; c0 < crossing_count(); ++c0) {
            if (piece_of_crossing_[c0] >= 0) continue;
            std::vector<int> stack{c0};
            piece_of_crossing_[c0] = n_pieces_;
            while (!stack.empty()) {
                int c = stack.back();
                stack.pop_back();
                for (int s = 0; s < 4; ++s) {
                    const Edge& e = edges_[crossings_[c].edge[s]];
                    for (int oc : {e.tail.crossing, e.head.crossing}) {
                        if (piece_of_crossing_[oc] < 0) {
                            piece_of_crossing_[oc] = n_pieces_;
                            stack.push_back(oc);
                        }
                    }
                }
            }
            ++n_pieces_;
        }
    }

    void trace_faces() {
        faces_.clear();
        dart_face_.assign(dart_count(), -1);
        corner_face_.assign(4 * crossing_count(), -1);
        for (int d0 = 0; d0 < dart_count(); ++d0) {
            if (dart_face_[d0] >= 0) continue;
            Face f;
            f.piece = edges_[d0 / 2].tail.crossing >= 0
                          ? piece_of_crossing_[edges_[d0 / 2].tail.crossing]
                          : 0;
            int d = d0;
            do {
                dart_face_[d] = int(faces_.size());
                f.darts.push_back(d);
                EndRef in = dart_arrival(d);
                corner_face_[4 * in.crossing + in.slot] = int(faces_.size());
                d = dart_leaving({in.crossing, (in.slot + 1) % 4});
            } while (d != d0);
            faces_.push_back(std::move(f));
        }
        color_faces();
    }

    void color_faces() {
        // Checkerboard coloring per piece; anchor at the face of the forward
        // dart of the piece's smallest edge.
        std::vector<int> color(faces_.size(), -1);
        std::vector<bool> anchored(size_t(std::max(n_pieces_, 1)), false);
        for (int e = 0; e < edge_count(); ++e) {
            int piece = piece_of_crossing_[edges_[e].tail.crossing];
            if (anchored[piece]) continue;
            anchored[piece] = true;
            std::vector<int> queue{dart_face_[2 * e]};
            color[queue[0]] = 0;
            while (!queue.empty()) {
                int f = queue.back();
                queue.pop_back();
                for (int d : faces_[f].darts) {
                    int g = dart_face_[d ^ 1];
                    require(g != f, errc::non_realizable, "edge borders one face twice");
                    if (color[g] == -1) {
                        color[g] = 1 - color[f];
                        queue.push_back(g);
                    } else {
                        require(color[g] == 1 - color[f], errc::non_realizable,
                                "faces are not checkerboard colorable");
                    }
                }
            }
        }
        for (size_t f = 0; f < faces_.size(); ++f) faces_[f].color = std::max(color[f], 0);
    }

    void check_euler() const {
        if (crossing_count() == 0) return;
        std::vector<int> V(n_pieces_, 0), E(n_pieces_, 0), F(n_pieces_, 0);
        for (int c = 0; c < crossing_count(); ++c) V[piece_of_crossing_[c]]++;
        for (const auto& e : edges_) E[piece_of_crossing_[e.tail.crossing]]++;
        for (const auto& f : faces_) F[f.piece]++;
        for (int p = 0; p < n_pieces_; ++p)
            require(V[p] - E[p] + F[p] == 2, errc::non_realizable,
                    "rotation system is not planar (Euler check failed)");
    }

    // --- canonicalization ----------------------------------------------------

    // Encode one connected piece starting the traversal at `start_edge`,
    // walking each component in its (possibly flipped) orientation.
    // Returns the sorted tuple list.
    std::vector<std::array<int, 4>> encode_piece(const std::vector<int>& piece_edges,
                                                 int start_edge,
                                                 const std::vector<bool>& flip) const {
        std::vector<int> label(edge_count(), 0);
        int next_label = 1;
        auto walk = [&](int e) {
            // Label the whole component of e following its virtual direction.
            int cur = e;
            do {
                label[cur] = next_label++;
                bool flipped = flip[edges_[cur].component];
                EndRef h = flipped ? edges_[cur].tail : edges_[cur].head;
                EndRef nxt{h.crossing, (h.slot + 2) % 4};
                cur = end_edge(nxt.crossing, nxt.slot);
            } while (cur != e);
        };
        walk(start_edge);
        // Deterministically pick subsequent components: scan labeled edges in
        // label order, inspect their endpoint crossings' slots in order, and
        // start at the first unlabeled edge found.
        bool progress = true;
        while (progress) {
            progress = false;
            std::vector<std::pair<int, int>> by_label;
            for (int e : piece_edges)
                if (label[e]) by_label.push_back({label[e], e});
            std::sort(by_label.begin(), by_label.end());
            for (auto& [L, e] : by_label) {
                for (EndRef r : {edges_[e].head, edges_[e].tail}) {
                    for (int s = 0; s < 4; ++s) {
                        int e2 = end_edge(r.crossing, s);
                        if (!label[e2]) {
                            walk(e2);
                            progress = true;
                            break;
                        }
                    }
                    if (progress) break;
                }
                if (progress) break;
            }
        }
        std::vector<std::array<int, 4>> tuples;
        std::set<int> piece_crossings;
        for (int e : piece_edges) {
            piece_crossings.insert(edges_[e].tail.crossing);
            piece_crossings.insert(edges_[e].head.crossing);
        }
        for (int c : piece_crossings) {
            // The tuple starts at the incoming under end w.r.t. the virtual
            // orientation: flipping the under strand swaps slots 0 and 2.
            int under_edge = crossings_[c].edge[0];
            int base = flip[edges_[under_edge].component] ? 2 : 0;
            std::array<int, 4> t;
            for (int s = 0; s < 4; ++s) t[s] = label[crossings_[c].edge[(base + s) % 4]];
            tuples.push_back(t);
        }
        std::sort(tuples.begin(), tuples.end());
        return tuples;
    }

    std::string canonical(bool fold_orientation) const {
        {
            std::lock_guard<std::mutex> lk(cache_->mu);
            auto& slot = fold_orientation ? cache_->folded : cache_->oriented;
            if (slot) return *slot;
        }
        // Group edges by piece.
        std::vector<std::vector<int>> piece_edges(std::max(n_pieces_, 1));
        for (int e = 0; e < edge_count(); ++e)
            piece_edges[piece_of_crossing_[edges_[e].tail.crossing]].push_back(e);

        std::vector<std::vector<std::array<int, 4>>> piece_codes;
        for (int p = 0; p < n_pieces_; ++p) {
            // Components present in this piece.
            std::set<int> comps;
            for (int e : piece_edges[p]) comps.insert(edges_[e].component);
            std::vector<int> comp_list(comps.begin(), comps.end());
            int n_flip = fold_orientation ? (1 << comp_list.size()) : 1;
            std::optional<std::vector<std::array<int, 4>>> best;
            std::vector<bool> flip(comp_edges_.size(), false);
            for (int mask = 0; mask < n_flip; ++mask) {
                for (size_t i = 0; i < comp_list.size(); ++i)
                    flip[comp_list[i]] = (mask >> i) & 1;
                for (int e : piece_edges[p]) {
                    auto code = encode_piece(piece_edges[p], e, flip);
                    if (!best || code < *best) best = std::move(code);
                }
            }
            for (size_t i = 0; i < comp_list.size(); ++i) flip[comp_list[i]] = false;
            piece_codes.push_back(std::move(*best));
        }
        std::sort(piece_codes.begin(), piece_codes.end());

        std::ostringstream os;
        os << "PD[";
        bool first = true;
        int offset = 0;
        for (const auto& pc : piece_codes) {
            int max_label = 0;
            for (const auto& t : pc) {
                if (!first) os << ",";
                first = false;
                os << "X(" << t[0] + offset << "," << t[1] + offset << "," << t[2] + offset << ","
                   << t[3] + offset << ")";
                for (int v : t) max_label = std::max(max_label, v);
            }
            offset += max_label;
        }
        for (int i = 0; i < free_loops_; ++i) {
            if (!first) os << ",";
            first = false;
            os << "O";
        }
        os << "]";
        std::string result = os.str();
        {
            std::lock_guard<std::mutex> lk(cache_->mu);
            auto& slot = fold_orientation ? cache_->folded : cache_->oriented;
            slot = result;
        }
        return result;
    }
};

// --- parsing ----------------------------------------------------------------

inline Diagram parse_pd(const PDCode& code) {
    require(code.free_loops >= 0, errc::malformed_code, "negative free loop count");
    int n = int(code.tuples.size());
    std::map<int, std::vector<int>> occurrences;  // label -> end ids
    for (int c = 0; c < n; ++c)
        for (int s = 0; s < 4; ++s) occurrences[code.tuples[c][s]].push_back(4 * c + s);
    std::vector<int> mate(4 * n, -1);
    for (auto& [label, ends] : occurrences) {
        require(ends.size() == 2, errc::malformed_code,
                "edge label " + std::to_string(label) + " must appear exactly twice");
        mate[ends[0]] = ends[1];
        mate[ends[1]] = ends[0];
    }
    return Diagram::assemble(n, mate, code.free_loops);
}

namespace detail {

// The position-sign propagation of the Dowker-Thistlethwaite realizability
// algorithm for double occurrence sequences of a single closed curve.
// a[1..2n] is the pairing involution.  On success fills f[1..2n] with
// (antisymmetric) local orientation signs.
inline bool dt_orient(int nc, const std::vector<int>& a, std::vector<int>& f) {
    int np = 2 * nc;
    if (np == 0) return true;
    std::vector<int> e(np + 1, 0), g(np + 1, 0), h(np + 1, 0);
    f.assign(np + 1, 0);
    f[1] = 1;
    f[a[1]] = -1;
    h[1] = 1;
    h[a[1]] = 1;
    int t = 1;
    while (t != 0) {
        e[t] = 1;
        for (int i = t + 1; i <= np; ++i)
            e[i] = (a[i] >= t && a[i] <= a[t]) ? -e[i - 1] : e[i - 1];
        for (int i = t - 1; i >= 1; --i)
            e[i] = (a[i + 1] >= t && a[i + 1] <= a[t]) ? -e[i + 1] : e[i + 1];
        std::fill(g.begin(), g.end(), 0);
        for (int i = 1; i <= t - 1; ++i) g[i] = 1;
        for (int i = a[t] + 1; i <= np; ++i) g[i] = 1;
        int s = 0;
        for (int i = 1; i <= np && s == 0; ++i)
            if (g[i] == 1) s = i;
        while (s != 0) {
            g[s] = g[a[s]] = 0;
            if (a[s] < t || a[s] > a[t]) {
                if (e[s] * e[a[s]] == -1) return false;
            } else {
                if (f[s] != 0) {
                    if (e[s] * e[a[s]] * f[t] != f[s]) return false;
                } else {
                    f[s] = e[s] * e[a[s]] * f[t];
                    f[a[s]] = -f[s];
                    bool twist = (s == 1 && std::abs(a[np] - a[1]) == 1) ||
                                 (s != 1 && (std::abs(a[s - 1] - a[s]) == 1 ||
                                             std::abs(a[s - 1] - a[s]) == np - 1));
                    if (!twist) {
                        h[s] = 1;
                        h[a[s]] = 1;
                    }
                }
            }
            s = 0;
            for (int i = 1; i <= np && s == 0; ++i)
                if (g[i] == 1) s = i;
        }
        h[t] = 0;
        h[a[t]] = 0;
        t = 0;
        for (int i = 1; i <= np && t == 0; ++i)
            if (h[i] == 1) t = i;
    }
    for (int i = 1; i <= np; ++i)
        if (f[i] == 0) return false;
    return true;
}

// Build a knot diagram from a closed-curve visit sequence: pairing a[1..2n],
// under[i] = strand passes under at time i, local signs f[1..2n].
inline Diagram diagram_from_curve(int nc, const std::vector<int>& a, const std::vector<bool>& under,
                                  const std::vector<int>& f, bool reflect) {
    int np = 2 * nc;
    // Crossing index per pair, taking the smaller time as primary.
    std::vector<int> cross_of_time(np + 1, -1);
    std::vector<int> first_time;
    for (int i = 1; i <= np; ++i) {
        if (cross_of_time[i] >= 0) continue;
        cross_of_time[i] = cross_of_time[a[i]] = int(first_time.size());
        first_time.push_back(i);
    }
    // Ends: in/out of each visit.  in(i) arrives along edge i-1; out(i) leaves
    // along edge i (edges are cyclic, 1-based times).
    // Assign slots: primary visit i, secondary j=a[i].  CCW order for f[i]=+1:
    // (i_in, j_in, i_out, j_out); for f[i]=-1: (i_in, j_out, i_out, j_in).
    // Then rotate so that slot 0 is the under-strand's incoming end.
    std::vector<int> end_of_in(np + 1), end_of_out(np + 1);
    for (int c = 0; c < nc; ++c) {
        int i = first_time[c];
        int j = a[i];
        int sgn = reflect ? -f[i] : f[i];
        std::array<int, 4> order;  // visit-end codes: even=in, odd=out, value 2*time+(0 in,1 out)
        if (sgn > 0)
            order = {2 * i, 2 * j, 2 * i + 1, 2 * j + 1};
        else
            order = {2 * i, 2 * j + 1, 2 * i + 1, 2 * j};
        int base = under[i] ? 0 : (order[1] == 2 * j ? 1 : 3);
        // slot k holds order[(base + k) % 4]
        for (int k = 0; k < 4; ++k) {
            int v = order[(base + k) % 4];
            if (v % 2 == 0)
                end_of_in[v / 2] = 4 * c + k;
            else
                end_of_out[v / 2] = 4 * c + k;
        }
    }
    std::vector<int> mate(4 * nc, -1);
    std::vector<std::pair<int, bool>> hints;
    for (int t = 1; t <= np; ++t) {
        int nxt = (t == np) ? 1 : t + 1;
        mate[end_of_out[t]] = end_of_in[nxt];
        mate[end_of_in[nxt]] = end_of_out[t];
        hints.push_back({end_of_out[t], false});
        hints.push_back({end_of_in[nxt], true});
    }
    return Diagram::assemble(nc, mate, 0, hints);
}

}  // namespace detail

// DT code of a knot: entry k pairs odd time 2k-1 with |entry|; the odd visit
// passes under exactly when the entry is positive.  `reflect` selects the
// mirror embedding of the shadow.
inline Diagram parse_dt(const DTCode& code, bool reflect = false) {
    int n = int(code.evens.size());
    if (n == 0) return Diagram::empty(1);
    int np = 2 * n;
    std::vector<int> a(np + 1, 0);
    std::vector<bool> under(np + 1, false);
    std::vector<bool> seen(np + 1, false);
    for (int k = 0; k < n; ++k) {
        int odd = 2 * k + 1;
        int v = code.evens[k];
        int even = std::abs(v);
        require(even >= 2 && even <= np && even % 2 == 0 && !seen[even], errc::malformed_code,
                "DT entries must be distinct even numbers up to 2n");
        seen[even] = true;
        a[odd] = even;
        a[even] = odd;
        under[odd] = v > 0;
        under[even] = v < 0;
    }
    std::vector<int> f;
    if (detail::dt_orient(n, a, f)) return detail::diagram_from_curve(n, a, under, f, reflect);

    // Composite shadows can stump the sign propagation; fall back to trying
    // all local sign patterns (desk-scale diagrams only).
    require(n <= 14, errc::non_realizable, "DT sequence not realizable (or too large)");
    f.assign(np + 1, 0);
    for (long long mask = 0; mask < (1LL << n); ++mask) {
        for (int k = 0; k < n; ++k) {
            int odd = 2 * k + 1;
            f[odd] = (mask >> k) & 1 ? 1 : -1;
            f[a[odd]] = -f[odd];
        }
        try {
            return detail::diagram_from_curve(n, a, under, f, reflect);
        } catch (const Error&) {
            continue;
        }
    }
    raise(errc::non_realizable, "DT sequence has no planar realization");
}

inline Diagram parse_gauss(const GaussCode& code) {
    if (code.components.empty()) return Diagram::empty(1);
    struct VisitRef {
        int comp, pos;
    };
    std::map<int, std::vector<std::pair<VisitRef, GaussCode::Visit>>> by_label;
    int total = 0;
    for (int ci = 0; ci < int(code.components.size()); ++ci) {
        require(!code.components[ci].empty(), errc::malformed_code,
                "empty component in Gauss code");
        for (int p = 0; p < int(code.components[ci].size()); ++p) {
            by_label[code.components[ci][p].label].push_back({{ci, p}, code.components[ci][p]});
            ++total;
        }
    }
    int n = int(by_label.size());
    require(total == 2 * n, errc::malformed_code, "each crossing label must appear exactly twice");

    std::map<int, int> crossing_of_label;
    std::vector<int> end_in(total), end_out(total);  // indexed by global visit id
    auto visit_id = [&](int comp, int pos) {
        int id = 0;
        for (int c = 0; c < comp; ++c) id += int(code.components[c].size());
        return id + pos;
    };
    int cidx = 0;
    for (auto& [label, vs] : by_label) {
        require(vs.size() == 2, errc::malformed_code,
                "crossing " + std::to_string(label) + " must be visited exactly twice");
        auto& [r1, v1] = vs[0];
        auto& [r2, v2] = vs[1];
        require(v1.over != v2.over, errc::malformed_code,
                "crossing " + std::to_string(label) + " needs one over and one under visit");
        require(v1.sign == v2.sign && (v1.sign == 1 || v1.sign == -1), errc::malformed_code,
                "crossing " + std::to_string(label) + " has inconsistent signs");
        const VisitRef& ur = v1.over ? r2 : r1;
        const VisitRef& orf = v1.over ? r1 : r2;
        int c = cidx++;
        crossing_of_label[label] = c;
        // slot 0/2: under in/out; over enters at slot 1 for sign +1, slot 3 for -1.
        end_in[visit_id(ur.comp, ur.pos)] = 4 * c + 0;
        end_out[visit_id(ur.comp, ur.pos)] = 4 * c + 2;
        if (v1.sign > 0) {
            end_in[visit_id(orf.comp, orf.pos)] = 4 * c + 1;
            end_out[visit_id(orf.comp, orf.pos)] = 4 * c + 3;
        } else {
            end_in[visit_id(orf.comp, orf.pos)] = 4 * c + 3;
            end_out[visit_id(orf.comp, orf.pos)] = 4 * c + 1;
        }
    }
    std::vector<int> mate(4 * n, -1);
    std::vector<std::pair<int, bool>> hints;
    for (int ci = 0; ci < int(code.components.size()); ++ci) {
        int k = int(code.components[ci].size());
        for (int p = 0; p < k; ++p) {
            int from = end_out[visit_id(ci, p)];
            int to = end_in[visit_id(ci, (p + 1) % k)];
            require(mate[from] == -1 && mate[to] == -1 && from != to, errc::malformed_code,
                    "Gauss code wiring clash");
            mate[from] = to;
            mate[to] = from;
            hints.push_back({from, false});
            hints.push_back({to, true});
        }
    }
    return Diagram::assemble(n, mate, 0, hints);
}

inline Diagram parse_diagram(const DiagramCode& code) {
    if (std::holds_alternative<PDCode>(code)) return parse_pd(std::get<PDCode>(code));
    if (std::holds_alternative<DTCode>(code)) return parse_dt(std::get<DTCode>(code));
    return parse_gauss(std::get<GaussCode>(code));
}

// --- text forms ---------------------------------------------------------------

inline std::string code_to_text(const DiagramCode& code) {
    std::ostringstream os;
    if (std::holds_alternative<PDCode>(code)) {
        const auto& pd = std::get<PDCode>(code);
        os << "PD[";
        bool first = true;
        for (const auto& t : pd.tuples) {
            if (!first) os << ",";
            first = false;
            os << "X(" << t[0] << "," << t[1] << "," << t[2] << "," << t[3] << ")";
        }
        for (int i = 0; i < pd.free_loops; ++i) {
            if (!first) os << ",";
            first = false;
            os << "O";
        }
        os << "]";
    } else if (std::holds_alternative<DTCode>(code)) {
        const auto& dt = std::get<DTCode>(code);
        os << "DT[";
        for (size_t i = 0; i < dt.evens.size(); ++i) os << (i ? " " : "") << dt.evens[i];
        os << "]";
    } else {
        const auto& g = std::get<GaussCode>(code);
        os << "GAUSS[";
        for (size_t c = 0; c < g.components.size(); ++c) {
            if (c) os << " | ";
            for (size_t p = 0; p < g.components[c].size(); ++p) {
                const auto& v = g.components[c][p];
                os << (p ? " " : "") << (v.over ? "O" : "U") << v.label << (v.sign > 0 ? "+" : "-");
            }
        }
        os << "]";
    }
    return os.str();
}

inline DiagramCode code_from_text(const std::string& text_in) {
    auto fail = [&]() -> void { raise(errc::malformed_code, "cannot parse: " + text_in); };
    std::string s = text_in;
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) fail();
    s = s.substr(b, e - b + 1);

    auto body_of = [&](const std::string& tag) -> std::optional<std::string> {
        if (s.rfind(tag + "[", 0) != 0 || s.back() != ']') return std::nullopt;
        return s.substr(tag.size() + 1, s.size() - tag.size() - 2);
    };

    if (auto body = body_of("PD")) {
        PDCode pd;
        size_t i = 0;
        auto skip_ws = [&]() {
            while (i < body->size() &&
                   (std::isspace(static_cast<unsigned char>((*body)[i])) || (*body)[i] == ','))
                ++i;
        };
        skip_ws();
        while (i < body->size()) {
            if ((*body)[i] == 'O' || (*body)[i] == 'o') {
                ++i;
                pd.free_loops++;
            } else if ((*body)[i] == 'X' || (*body)[i] == 'x') {
                ++i;
                if (i >= body->size() || (*body)[i] != '(') fail();
                size_t close = body->find(')', i);
                if (close == std::string::npos) fail();
                std::string nums = body->substr(i + 1, close - i - 1);
                std::array<int, 4> t;
                int k = 0;
                std::istringstream is(nums);
                std::string item;
                while (std::getline(is, item, ',')) {
                    if (k >= 4) fail();
                    try {
                        t[k++] = std::stoi(item);
                    } catch (...) {
                        fail();
                    }
                }
                if (k != 4) fail();
                pd.tuples.push_back(t);
                i = close + 1;
            } else {
                fail();
            }
            skip_ws();
        }
        return pd;
    }
    if (auto body = body_of("DT")) {
        DTCode dt;
        std::istringstream is(*body);
        std::string item;
        while (is >> item) {
            try {
                dt.evens.push_back(std::stoi(item));
            } catch (...) {
                fail();
            }
        }
        return dt;
    }
    if (auto body = body_of("GAUSS")) {
        GaussCode g;
        g.components.push_back({});
        std::istringstream is(*body);
        std::string tok;
        bool any = false;
        while (is >> tok) {
            any = true;
            if (tok == "|") {
                g.components.push_back({});
                continue;
            }
            GaussCode::Visit v;
            if (tok.size() < 3) fail();
            if (tok[0] == 'O' || tok[0] == 'o')
                v.over = true;
            else if (tok[0] == 'U' || tok[0] == 'u')
                v.over = false;
            else
                fail();
            char sgn = tok.back();
            if (sgn == '+')
                v.sign = 1;
            else if (sgn == '-')
                v.sign = -1;
            else
                fail();
            try {
                v.label = std::stoi(tok.substr(1, tok.size() - 2));
            } catch (...) {
                fail();
            }
            g.components.back().push_back(v);
        }
        if (!any) g.components.clear();
        return g;
    }
    fail();
    return PDCode{};  // unreachable
}

inline Diagram parse_diagram_text(const std::string& text) {
    return parse_diagram(code_from_text(text));
}

// --- combinations ----------------------------------------------------------

inline Diagram disjoint_union(const Diagram& a, const Diagram& b) {
    int na = a.crossing_count();
    int n = na + b.crossing_count();
    std::vector<int> mate(4 * n, -1);
    std::vector<std::pair<int, bool>> hints;
    auto add = [&](const Diagram& d, int coff) {
        for (int e = 0; e < d.edge_count(); ++e) {
            int from = (d.edge(e).tail.crossing + coff) * 4 + d.edge(e).tail.slot;
            int to = (d.edge(e).head.crossing + coff) * 4 + d.edge(e).head.slot;
            mate[from] = to;
            mate[to] = from;
            hints.push_back({from, false});
            hints.push_back({to, true});
        }
    };
    add(a, 0);
    add(b, na);
    return Diagram::assemble(n, mate, a.free_loops() + b.free_loops(), hints);
}

}  // namespace knotforge
