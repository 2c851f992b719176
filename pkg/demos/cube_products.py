# Triangulating products of cubes, and what it says about cube simplexity.
#
# A 3-cube whose top and bottom faces are not parallel squares but two
# trapezoids admits a 7-tetrahedron triangulation whose pieces all have
# combinatorially the same type.  Multiplying by a segment and splitting
# every product cell by the staircase rule gives 7 * C(4,3) = 28 simplices
# of the 4-cube.  Since 28 > 4! = 24, repeated products grow faster than d!.

from polydissect.families import haiman_product, segment, trapezoid_cube_7

cube = trapezoid_cube_7()
print("trapezoid cube:", cube, [s.vertex_labels for s in cube.simplices])

square, _ = haiman_product(segment(), segment())
print("segment x segment:", square.size, "triangles")

prod, report = haiman_product((cube.config, cube), segment())
print("cube x segment:", prod.size, "simplices,", prod.status.value)
print(report.describe())
