#!/usr/bin/env python3
import unittest

from testQuaternion import *
from testLinalg import *
from testModem import *
from testChannel import *
from testAdaptive import *
from testWiener import *
from testUtil import *
from testExperiment import *
from testCli import *
# skipped unless QUATLINK_SLOW=1
from testAcceptance import *

if __name__ == "__main__":
    unittest.main()
