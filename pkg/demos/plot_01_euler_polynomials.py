"""
Euler polynomials and their coefficients
========================================

The operator is built from the polynomials E_k, whose coefficients are
Eulerian numbers.  Two independent constructions give the same integers.
"""

from math import factorial

from discrete_analogue import coeffs_by_recurrence, coeffs_explicit

# The first few rows, by the three-term recurrence
for k in range(7):
    print(k, coeffs_by_recurrence(k).coeffs)

# The alternating binomial sum gives the same rows, exactly
k = 12
rec, exp = coeffs_by_recurrence(k), coeffs_explicit(k)
print("agree:", rec == exp)

# Each row is a palindrome summing to (k+1)!
print("palindrome:", rec.is_palindromic())
print("row sum:", sum(rec.coeffs), "=", factorial(k + 1))

# At x = 1 the polynomial returns its row sum
print("E_4(1) =", coeffs_by_recurrence(4)(1))
