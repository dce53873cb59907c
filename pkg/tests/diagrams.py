"""PD codes shared across the test suite."""

TREFOIL = "PD[X(1,5,2,4), X(3,1,4,6), X(5,3,6,2)]"
MIRROR_TREFOIL = "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]"
CURL = "PD[X(1,1,2,2)]"
HOPF = "PD[X(1,3,2,4), X(3,1,4,2)]"
FIG8 = "PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]"
CINQUEFOIL = "PD[X(2,8,3,7), X(4,10,5,9), X(6,2,7,1), X(8,4,9,3), X(10,6,1,5)]"
UNKNOT = "PD[O]"
UNLINK2 = "PD[O,O]"
EMPTY = "PD[]"
# 3-crossing unknot with a movable triangle: strand t passes over both of
# its crossings, strand b under both, so the triangle slides across the
# middle crossing
R3_UNKNOT = "PD[X(5,3,1,4), X(2,3,5,6), X(1,2,6,4)]"
