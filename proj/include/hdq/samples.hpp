#pragma once

// The worked-example automata, also shipped as samples/*.hdq.
namespace hdq::samples {

inline constexpr const char* fig_limsup = R"(# LimSup automaton, not HD: Eve must guess at s0
valuefn: LimSup
mode: infinite
alphabet: a b
states: s0 s1 s2 s3 s4
initial: s0
s0 a 1 s1
s0 b 1 s1
s0 a 1 s2
s0 b 1 s2
s1 a 2 s1
s1 b 2 s1
s2 a 3 s3
s2 b 1 s4
s3 a 3 s3
s3 b 3 s3
s4 a 1 s4
s4 b 1 s4
)";

inline constexpr const char* fig_sup = R"(# Sup automaton: Eve wins G1 but the automaton is not HD
valuefn: Sup
mode: infinite
alphabet: a b
states: s0 s1
initial: s0
s0 a 0 s0
s0 b 3 s0
s0 a 0 s1
s0 b 3 s1
s1 a 1 s1
s1 b 2 s1
)";

inline constexpr const char* fig_reach_b_infinite = R"(# Reachability automaton B (infinite words)
valuefn: Reachability
mode: infinite
alphabet: a b
states: s0 s1 s2 s3
initial: s0
s0 a 0 s1
s0 b 0 s1
s0 a 0 s2
s0 b 0 s2
s1 a 1 s3
s1 b 0 s3
s2 a 0 s3
s2 b 1 s3
s3 a 1 s3
s3 b 1 s3
)";

inline constexpr const char* fig_reach_b_finite = R"(# Reachability automaton B (finite words)
valuefn: Reachability
mode: finite
alphabet: a b
states: s0 s1 s2 s3
initial: s0
s0 a 0 s1
s0 b 0 s1
s0 a 0 s2
s0 b 0 s2
s1 a 1 s3
s1 b 0 s3
s2 a 0 s3
s2 b 1 s3
s3 a 1 s3
s3 b 1 s3
)";

} // namespace hdq::samples
