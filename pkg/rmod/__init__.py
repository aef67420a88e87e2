# rmod module
