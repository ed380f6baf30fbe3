#!/usr/bin/env python3

# quatlink -- quaternion link experiments

import sys
from quatlink.client.qlk import QuatLink

if __name__ == "__main__":
    sys.exit(QuatLink().main())
