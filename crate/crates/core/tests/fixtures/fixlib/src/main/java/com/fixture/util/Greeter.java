package com.fixture.util;

/**
 * Greeting lookup with a single known key.
 */
public class Greeter {
    private String salutation;

    public Greeter() {
        this.salutation = "Hello";
    }

    public String greet(String name) {
        return salutation + ", " + name + "!";
    }

    public String find(String key) {
        if (key.equals("greeting")) {
            return salutation;
        }
        return null;
    }
}
