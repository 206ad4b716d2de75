package com.fixture.calc;

/**
 * Small integer calculator with a running result.
 */
public class Calculator {
    private int lastResult;

    public Calculator() {
        this.lastResult = 0;
    }

    public int sum(int a, int b) {
        lastResult = a + b;
        return lastResult;
    }

    public int sum(int a, int b, int c) {
        lastResult = a + b + c;
        return lastResult;
    }

    public int divide(int a, int b) {
        lastResult = a / b;
        return lastResult;
    }

    public int lastResult() {
        return lastResult;
    }
}
