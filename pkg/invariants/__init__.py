# invariants module
