class HpDesignException(Exception):
    pass


class SelfIntersection(HpDesignException):
    pass


class BadToken(HpDesignException):
    pass


class TooShort(HpDesignException):
    pass


class LengthMismatch(HpDesignException):
    pass


class BoundExceeded(HpDesignException):
    pass


class NoValidInstance(HpDesignException):
    pass


class BadLambda(HpDesignException):
    pass


class BadComposition(HpDesignException):
    pass


class DimensionMismatch(HpDesignException):
    pass


class BadVariant(HpDesignException):
    pass


class BadLayers(HpDesignException):
    pass


class ArityMismatch(HpDesignException):
    pass


class InstanceFileException(HpDesignException):
    pass


class ConfigException(HpDesignException):
    pass
