"""SpinXfer Test Suite"""
