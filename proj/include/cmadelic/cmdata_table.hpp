#pragma once

// Embedded copy of data/simplest_curves.txt. Regenerate with
// tools/gen_simplest_table and paste the output here and into data/.

namespace cmadelic {

inline const char* simplest_table_text() {
    return R"TBL(# simplest CM curves over Q, format v1
# columns: label disc ell n A B conductor gens
#   A, B: short Weierstrass model y^2 = x^3 + A x + B (j checked on load)
#   gens: generators of the mod-ell^n Galois image in the working
#         (delta, phi) basis, semicolon-separated row-major 4-tuples
# The label <-> image-class matching is validated by Frobenius trace/det
# consistency at primes < 2000. Sign choices invisible to Frobenius data
# (the c_eps twins) follow label order plus the assignments pinned by
# published worked examples; see gen_simplest_table.cpp.
243.a1 -3 3 3 0 -48 243 4,0,0,4;15,1,26,14;1,0,26,26
243.a2 -3 3 3 0 1296 243 4,0,0,4;15,1,26,14;26,0,1,1
243.b1 -3 3 3 0 -3888 243 4,0,0,4;26,14,13,12;1,0,26,26
243.b2 -3 3 3 0 144 243 4,0,0,4;26,14,13,12;26,0,1,1
27.a3 -3 3 3 0 -432 27 25,24,3,1;22,21,6,1;4,0,0,4;1,0,26,26
27.a4 -3 3 3 0 16 27 25,24,3,1;22,21,6,1;4,0,0,4;26,0,1,1
36.a1 -12 3 1 -135 -594 36 1,1,0,1;1,0,0,2
36.a2 -12 3 1 -15 22 36 1,1,0,1;2,0,0,1
27.a1 -27 3 1 -4320 -109296 27 1,1,0,1;1,0,0,2
27.a2 -27 3 1 -480 4048 27 1,1,0,1;2,0,0,1
256.b1 -4 2 4 -2 0 256 13,0,0,13;14,1,15,14;1,0,0,15
256.b2 -4 2 4 8 0 256 13,0,0,13;14,1,15,14;0,1,1,0
256.c1 -4 2 4 -8 0 256 13,0,0,13;2,15,1,2;1,0,0,15
256.c2 -4 2 4 2 0 256 13,0,0,13;2,15,1,2;0,1,1,0
32.a3 -4 2 4 -1 0 32 5,0,0,5;15,14,2,15;1,0,0,15
32.a4 -4 2 4 4 0 32 5,0,0,5;15,14,2,15;0,1,1,0
64.a3 -4 2 4 -4 0 64 5,0,0,5;1,2,14,1;1,0,0,15
64.a4 -4 2 4 1 0 64 5,0,0,5;1,2,14,1;0,15,15,0
32.a1 -16 2 4 -11 -14 32 5,0,0,5;15,15,4,15;1,0,0,15
32.a2 -16 2 4 -11 14 32 5,0,0,5;15,15,4,15;15,0,0,1
64.a1 -16 2 4 -44 -112 64 5,0,0,5;1,1,12,1;1,0,0,15
64.a2 -16 2 4 -44 112 64 5,0,0,5;1,1,12,1;15,0,0,1
49.a2 -7 7 1 -1715 33614 49 2,2,3,0;1,1,5,0;1,0,6,6
49.a4 -7 7 1 -35 -98 49 2,2,3,0;1,1,5,0;6,0,1,1
49.a1 -28 7 1 -29155 1915998 49 1,1,0,1;2,0,0,2;1,0,0,6
49.a3 -28 7 1 -595 -5586 49 1,1,0,1;2,0,0,2;6,0,0,1
256.a1 -8 2 4 -1080 -12096 256 3,0,0,3;15,15,2,15;15,0,0,1
256.a2 -8 2 4 -270 1512 256 3,0,0,3;15,15,2,15;1,0,0,15
256.d1 -8 2 4 -1080 12096 256 3,0,0,3;1,1,14,1;1,0,0,15
256.d2 -8 2 4 -270 -1512 256 3,0,0,3;1,1,14,1;15,0,0,1
121.b1 -11 11 1 -1149984 -487018224 121 7,7,1,0;1,0,10,10
121.b2 -11 11 1 -9504 365904 121 7,7,1,0;10,0,1,1
361.a1 -19 19 1 -219488 -39617584 361 15,15,1,0;1,0,18,18
361.a2 -19 19 1 -608 5776 361 15,15,1,0;18,0,1,1
1849.b1 -43 43 1 -25442240 -49394836848 1849 39,39,1,0;19,19,6,0;1,0,42,42
1849.b2 -43 43 1 -13760 621264 1849 39,39,1,0;19,19,6,0;42,0,1,1
4489.b1 -67 67 1 -529342880 -4687634371504 4489 63,63,1,0;1,0,66,66
4489.b2 -67 67 1 -117920 15585808 4489 63,63,1,0;66,0,1,1
26569.a1 -163 163 1 -924354639680 -342062961763303088 26569 159,159,1,0;1,0,162,162
26569.a2 -163 163 1 -34790720 78984748304 26569 159,159,1,0;162,0,1,1
)TBL";
}

} // namespace cmadelic
