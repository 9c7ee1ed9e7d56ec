"""Growth exponents of a few orbit counts, and the ladder between two schedules."""

import math

from shcalc.reeb_growth import (CountFunction, LogNumber, TorusPieceProfile, geometric_taus,
                                growth_exponent, ladder_verify, lattice_count_function,
                                schedule_gap, torus_count_function)

taus = geometric_taus(8, 16384)
print("floor(t)          ", growth_exponent(CountFunction.from_callable(math.floor, taus)))
print("torus piece       ", growth_exponent(torus_count_function(TorusPieceProfile.linear(), taus)))
print("lattice Z^2       ", growth_exponent(lattice_count_function(2, taus)))
print("lattice Z^3       ", growth_exponent(lattice_count_function(3, geometric_taus(8, 1024))))
print("exp(t)            ", growth_exponent(CountFunction.from_callable(
    lambda t: math.floor(math.exp(t)), geometric_taus(1, 512))))

# a decay rate C over an interval of length log 2 forces tau_- >= 2 tau_+
b = schedule_gap(1, LogNumber.log(2))
print("gap is exactly 2:", b.compare(2) == 0, " tau_-(10) =", b.tau_minus(10))

sq = CountFunction.from_callable(lambda t: math.floor(t * t), taus)
half = CountFunction.from_callable(lambda t: math.floor(t * t / 2), taus)
print("ladder:", ladder_verify(sq, half, 2, (8, 4096)))
