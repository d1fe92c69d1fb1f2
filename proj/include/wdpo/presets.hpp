#ifndef WDPO_PRESETS_HPP
#define WDPO_PRESETS_HPP

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "wdpo/io.hpp"

namespace wdpo {

// Placeholders x -> y; (x:=y) and (y:=x+y) over the term algebra on {u, v}.
RulePtr fib_copy_rule();
RulePtr fib_sum_rule();
AttrGraphPtr fib_host(std::uint64_t x, std::uint64_t y);
SystemSpec fibonacci_system(std::uint64_t x = 1, std::uint64_t y = 2);

struct Axial {
    int q = 0;
    int r = 0;

    friend auto operator<=>(const Axial&, const Axial&) = default;
};

// Direction k: (1,0), (1,-1), (0,-1), (-1,0), (-1,1), (0,1); k+3 is opposite.
const std::array<Axial, 6>& hex_directions();
Axial neighbor(Axial a, int direction);
int hex_distance(Axial a, Axial b);

std::string cell_id(Axial a);

// Node sort "cell"; edge sorts dir0..dir5 between cells.
SignaturePtr hex_signature();
Algebra cell_algebra();

// All cells within `radius` of the origin, {1} when live and {0} otherwise;
// each adjacent pair a, b carries dir_k a -> b and dir_{k+3} b -> a.
AttrGraphPtr hex_grid(int radius, const std::set<Axial>& live);

// Birth rule rotated so that the single live neighbor lies in `direction`.
RulePtr huw_rule(int direction);
std::vector<RulePtr> huw_rules();

// Cells labelled {1}, decoded from their ids.
std::set<Axial> live_cells(const AttributedGraph& grid);

} // namespace wdpo

#endif // WDPO_PRESETS_HPP
