#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gsf {

// Connected multigraph with half-edge structure, leaves, per-vertex loop
// defects and an implicit marking: vertex index v carries mark v+1. Half-edge
// ids are global and unique; a half-edge not on any edge is a leaf.
struct MarkedGraph {
    std::vector<int> defect;                 // per vertex
    std::vector<std::vector<int>> halves;    // per vertex, in slot order
    std::vector<std::pair<int, int>> edges;  // unordered pairs of half ids (stored min,max)

    int num_vertices() const { return static_cast<int>(defect.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_halves() const;
    int num_leaves() const;
    int valency(int v) const { return static_cast<int>(halves[v].size()); }

    int vertex_of(int half) const;
    bool is_leaf(int half) const;
    int leaf_count(int v) const;

    bool connected() const;
    // betti = sum of defects + |e| - |v| + 1; requires a connected graph.
    int betti() const;

    void validate() const;
};

// Complete isomorphism invariant at fixed markings: defects, per-vertex leaf
// counts, self-loop counts and the edge multiplicity matrix.
std::string canonical_form(const MarkedGraph& g);

// Order of the automorphism group: half-edge permutations fixing every vertex,
// preserving the edge pairing and mapping leaves to leaves.
unsigned long long aut_order(const MarkedGraph& g);

struct EnumOptions {
    bool stable_only = false;  // keep only vertices with 2g(v)-2+|h_v| > 0
};

// All isomorphism classes of connected marked graphs with betti g, n leaves
// and m vertices, sorted by canonical form. A profile pins per-vertex
// (valency, defect); infeasible profiles throw.
std::vector<MarkedGraph> enumerate_graphs(int g, int n, int m,
                                          const std::optional<std::vector<std::pair<int, int>>>& profile = std::nullopt,
                                          const EnumOptions& opts = {});

// Classes with prescribed valencies, defects and edge count (no (g,n) input);
// the profile-matching cells of the graph sum.
std::vector<MarkedGraph> enumerate_by_profile(const std::vector<int>& valencies,
                                              const std::vector<int>& defects, int e);

struct SplitResult {
    bool connected = false;
    MarkedGraph graph;  // connected case: m+1 vertices, vertex 1 keeps I, last vertex carries J

    // Disconnected case: the two components with marks compressed
    // order-preservingly; old 1-based marks listed per component (the new
    // vertex counts as mark m+1).
    MarkedGraph comp_i, comp_j;
    std::vector<int> marks_i, marks_j;

    // The split graph before component extraction (m+1 vertices, possibly
    // disconnected); its canonical form decides partition equivalence.
    MarkedGraph whole;
};

// Splits vertex 1 along I|J. Defect transfer: vertex 1 keeps defect_i (default
// its full defect), the new vertex gets defect_j (default 0).
SplitResult split_vertex(const MarkedGraph& g, const std::vector<int>& I,
                         const std::vector<int>& J, int defect_i = -1, int defect_j = -1);

struct PartitionClass {
    std::vector<int> I, J;  // representative partition of h_1
    std::string key;        // canonical form of the split graph
};

// Partitions of h_1 with |I|=k1, |J|=k2 modulo isomorphism of split results.
std::vector<PartitionClass> partitions_mod_equiv(const MarkedGraph& g, int k1, int k2);

struct BElement {
    MarkedGraph graph;
};

struct CElement {
    MarkedGraph g1, g2;
    std::vector<int> L1, L2;  // 1-based marks; 1 in L1, m in L2
};

using PsiImage = std::variant<BElement, CElement>;

struct AElement {
    MarkedGraph graph;
    std::vector<int> I, J;
    int defect_i = 0, defect_j = 0;
};

PsiImage psi(const MarkedGraph& g, const std::vector<int>& I, const std::vector<int>& J,
             int defect_i = -1, int defect_j = -1);
AElement psi_inv(const PsiImage& image);

MarkedGraph relabel_swap(const MarkedGraph& g, int a, int b);  // 0-based vertex indices

enum class DefectMode { Redistribute, Fixed };

struct GtReport {
    int g = 0, n = 0, k1 = 0, k2 = 0, m = 0;
    size_t size_a = 0, size_b = 0, size_c = 0;
    bool counts_match = false;
    bool keys_match = false;
    bool roundtrips_ok = false;
    std::string counterexample;
    bool ok() const { return counts_match && keys_match && roundtrips_ok; }
};

// Exhaustive check of the split/merge bijection for one parameter cell:
// A-elements are (class in Gamma(g,n)_{m-1}, partition class, defect split);
// the connected side is enumerated at betti g-1, the disconnected side at
// g1+g2 = g.
GtReport verify_gt_bijection(int g, int n, int k1, int k2, int m,
                             DefectMode mode = DefectMode::Redistribute);

}  // namespace gsf
