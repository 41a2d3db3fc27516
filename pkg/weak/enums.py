""" This module describes system wide enums.
"""


class Enum(object):
    """ Base class for enums
    """
    __global_increment = 1

    def __init__(self, for_str):
        """ Initialize base class for enumerates.
        :param for_str: return value for build in str() function, also the
                        name used in config files and on command line.
        """
        self.value = Enum.__global_increment
        self._str = for_str
        Enum.__global_increment += 1

    def __eq__(self, other):
        return isinstance(other, Enum) and self.value == other.value

    def __ne__(self, other):
        return not self.__eq__(other)

    def __str__(self):
        return self._str

    def __repr__(self):
        return "{}({})".format(self.__class__.__name__, self._str)

    def __hash__(self):
        return self.value


def from_name(choices, name):
    """ Find enum member by its string name.
    :param choices: iterable with enum members.
    :param name: string name, case insensitive.
    :return: enum member.
    :raise ValueError: if nothing matches.
    """
    for c in choices:
        if str(c) == str(name).lower():
            return c
    raise ValueError("unknown value '{}', expected one of {}"
                     .format(name, ", ".join(str(c) for c in choices)))


class Orientation(Enum):
    """ Enum for confusion matrix orientation.
        Backward matrix holds Pr(y|weak y) and is column stochastic,
        forward matrix holds Pr(weak y|y) with rows for true classes.
    """
    pass

BACKWARD = Orientation("backward")
FORWARD = Orientation("forward")
ORIENTATIONS = (BACKWARD, FORWARD)


class Projection(Enum):
    """ Enum for choosing how signed measures are mapped to pmfs.
    """
    pass

PROJECTION_CLIP = Projection("clip")
PROJECTION_SIMPLEX = Projection("simplex")
PROJECTIONS = (PROJECTION_CLIP, PROJECTION_SIMPLEX)
