#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tentlab/grid.hpp"

namespace tentlab {

// Tent over B on the lattice: (y_j, t_k) with radius - |y_j - center| >= t_k.
bool in_tent(const Grid& g, const Ball& b, int j, int k);

// Atom payloads are stored on a compact x-window (level-major, width cells
// starting at jlo); full-grid storage per atom would not scale to the
// default grid.
struct TentAtom {
    Grid grid;
    long jlo = 0;
    long width = 0;
    std::vector<double> values; // K * width
    Ball ball;
    double q = 1.0;
    double r = 2.0;
    bool cancelling = false;

    explicit TentAtom(const Grid& g) : grid(g) {}
    double value(int k, long j) const {
        if (j < jlo || j >= jlo + width) return 0.0;
        return values[static_cast<std::size_t>(k) * width + (j - jlo)];
    }
    HalfSpaceFunction dense() const;
};

struct AtomReport {
    bool support_ok = false;
    double size_ratio = 0.0;          // measured norm / |B|^{1/r-1/q}
    double cancellation_defect = 0.0; // max_k |slice integral| / max_k slice L1 mass
};

AtomReport atom_validate(const TentAtom& a);

// chi_{B-hat} scaled to exact admissibility (cancelling=false reference atom)
TentAtom make_indicator_atom(const Grid& g, const Ball& b, double q, double r);
// normalize arbitrary data on an x-window to an exactly admissible atom;
// returns the coefficient lambda = measured norm * |B|^{1/q-1/r}
TentAtom normalize_atom(TentAtom piece, double& lambda);

struct AtomicDecomposition {
    std::vector<double> coefficients;
    std::vector<TentAtom> atoms;
    double source_norm = 0.0;      // tent_norm(F, q, r)
    double coefficient_norm = 0.0; // (sum lambda^q)^{1/q}
    std::optional<Grid> grid;      // source grid, so empty decompositions reconstruct to 0
};

// Level-set / Whitney atomic decomposition (q <= 1): O_k = {A_r F > 2^k},
// enlargement {M_u chi > 1/2}, Whitney cubes, annular tent regions, atom
// balls B(center(Q), 6 sqrt(n) l(Q)). Exact partition of supp F.
AtomicDecomposition atomic_decompose(const HalfSpaceFunction& F, double q, double r);

HalfSpaceFunction reconstruct(const AtomicDecomposition& dec);

struct Molecule {
    HalfSpaceFunction data;
    Ball ball;
    double q = 1.0;
    double r = 2.0;
    double epsilon = 1.0;
    bool cancelling = false;
};

struct MoleculeReport {
    std::vector<double> shell_ratios; // ratio per shell j = 1, 2, ...
    double cancellation_defect = 0.0;
    double fitted_decay = 0.0; // LSQ slope of log2(norm_j |B_{j+1}|^{1/q-1/r}) vs -j
    bool reliable = false;     // >= 3 nonempty shells
};

// Shell j regions: C_1-hat = tent(4B); C_j-hat = tent(2^{j+1}B) minus
// tent(2^j B). Allowed bounds |4B|^{1/r-1/q} and 2^{-(j+1)eps}|2^{j+1}B|^{1/r-1/q}.
MoleculeReport molecule_validate(const Molecule& m);

// number of shells whose ball B(center, 2^{j+1} radius) stays in the domain
int molecule_shell_count(const Grid& g, const Ball& b);

// The telescoping alpha_j / beta_j construction: exact reconstruction,
// every output atom cancelling and exactly admissible.
AtomicDecomposition molecule_to_atoms(const Molecule& m);

} // namespace tentlab
