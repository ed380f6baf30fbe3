from quatlink.util.enumeration import Enum

QLCODE = Enum(
    DIMENSION=3,
    DOMAIN=4,
    SINGULAR=5,
    DIVERGED=6,
    NODATA=7,
    FAILED=8,
    CONFIG=9,
    IOERROR=10,
)
