#pragma once

#include "ftd/graph.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ftd
{
    /**
     * Small pattern graph H with root set S. Optional vertex classes (R, G, O, P, B) must
     * partition V(H) when present; optional marked vertices name the sigma/beta endpoints.
     */
    struct RootedPattern
    {
        std::string name;
        Graph graph;
        std::vector<Vertex> roots;
        std::vector<std::string> labels;
        std::map<char, std::vector<Vertex>> classes;
        std::map<std::string, std::vector<Vertex>> marks;

        Vertex num_vertices() const { return graph.num_vertices(); }
        std::string label(Vertex v) const;
        /// Vertex with the given label; throws InvalidInput if absent.
        Vertex vertex(const std::string &label) const;
        /// Non-root vertices in increasing order.
        std::vector<Vertex> free_vertices() const;
        /// Throws InvalidInput if roots repeat or fall outside V(H), or classes do not partition V(H).
        void validate() const;

        /// Same graph and labels with another root set given by labels.
        RootedPattern with_roots(const std::vector<std::string> &root_labels) const;
        /// Induced subpattern on the given vertices, relabelled in the given order; roots restricted.
        RootedPattern induced(const std::vector<Vertex> &keep, std::vector<Vertex> new_roots) const;
    };

    /**
     * Number of injections psi: V(H) -> V(G) extending phi (images of P.roots, in order) that
     * preserve every H-edge with an endpoint outside the root set.
     */
    std::uint64_t rooted_extension_count(const RootedPattern &p, const Graph &g, const std::vector<Vertex> &phi);

    // Built-in families. Vertex labels follow the definitions: w0..w{2k-1} and c for wheels;
    // a0..a7, c_a, b1..b6, c_b, d for W(i) (with b0 = a_{i-1}, b7 = a_i); theta1..theta6, c_theta for W(i,j).

    /// W_{2k} with roots {w0, w_{2k-1}}.
    RootedPattern wheel(int k);
    /// W_8[Q_t], Q_t = {w7, w0, ..., w_{t-1}, c}, with roots {w0, w7}; t in [6].
    RootedPattern wheel_segment(int t);
    /// The bowtie with roots {u, v}.
    RootedPattern bowtie_pattern();
    /// W(i), i in [7], with roots {d, a7}.
    RootedPattern family_w(int i);
    /// W(i, j) for (i, j) in T, with roots {d, a7}.
    RootedPattern family_wij(int i, int j);

    using IndexPair = std::pair<int, int>;
    using IndexTriple = std::array<int, 3>;

    std::vector<IndexPair> index_set_t();
    std::vector<IndexPair> index_set_v();
    /// [6] x [7] minus T and V.
    std::vector<IndexPair> index_set_p();
    std::vector<IndexTriple> index_set_q();

    /// Label of b_j in W(i), resolving the identifications b0 = a_{i-1}, b7 = a_i.
    std::string b_label(int i, int j);
    /// Label of theta_m in W(i, j), resolving theta0 = b_{j-1}, theta7 = b_j.
    std::string theta_label(int i, int j, int m);

    /// Builds a family by name: "wheel" (k), "segment" (t), "bowtie", "W" (i), "W2" (i, j).
    RootedPattern build_family(const std::string &name, const std::vector<int> &params);

    // Text format: name; "n m"; m edge lines; "S: id..."; optional "class <R|G|O|P|B>: id...";
    // optional "mark <sigma|beta>: id...". '#' starts a comment line.
    RootedPattern read_pattern(std::istream &in);
    RootedPattern read_pattern(const std::filesystem::path &path);
    void write_pattern(std::ostream &out, const RootedPattern &p);
}
