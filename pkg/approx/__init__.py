# approx module
